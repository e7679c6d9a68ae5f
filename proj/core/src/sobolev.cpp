#include "gffexc/sobolev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gffexc {
namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

}  // namespace

SobolevNorm::SobolevNorm(const LatticeDomain& domain, const SobolevSpec& spec) : domain_(&domain) {
  const Rectangle& sq = spec.square;
  const double side = sq.width();
  if (!(spec.exponent > 0.0)) throw std::invalid_argument("Sobolev exponent must be positive");
  if (!(side > 0.0) || std::abs(sq.height() - side) > 1e-12 * side) {
    throw std::invalid_argument("embedding region must be a square");
  }
  const double h = domain.mesh();
  if (!is_integer(side / h) || !is_integer(sq.x0 / h) || !is_integer(sq.y0 / h)) {
    throw std::invalid_argument("embedding square is not aligned with the lattice");
  }
  const auto cells = static_cast<std::int64_t>(std::llround(side / h));
  const auto off_i = static_cast<std::int64_t>(std::llround(sq.x0 / h));
  const auto off_j = static_cast<std::int64_t>(std::llround(sq.y0 / h));
  const std::int64_t a_lo = domain.i_min() - off_i;
  const std::int64_t a_hi = domain.i_max() - off_i;
  const std::int64_t b_lo = domain.j_min() - off_j;
  const std::int64_t b_hi = domain.j_max() - off_j;
  if (a_lo < 1 || b_lo < 1 || a_hi > cells - 1 || b_hi > cells - 1) {
    throw std::invalid_argument("embedding square does not contain the domain");
  }

  const auto resolvable = static_cast<std::size_t>(cells - 1);
  frequencies_ = spec.max_frequency == 0 ? resolvable : std::min(spec.max_frequency, resolvable);
  if (frequencies_ < 1) throw std::invalid_argument("max frequency must be >= 1");
  const auto kf = static_cast<Eigen::Index>(frequencies_);
  const double pi = std::numbers::pi;

  sin_x_.resize(a_hi - a_lo + 1, kf);
  for (std::int64_t a = a_lo; a <= a_hi; ++a) {
    for (Eigen::Index j = 0; j < kf; ++j) {
      sin_x_(a - a_lo, j) = std::sin(pi * static_cast<double>((j + 1) * a) / static_cast<double>(cells));
    }
  }
  sin_y_.resize(b_hi - b_lo + 1, kf);
  for (std::int64_t b = b_lo; b <= b_hi; ++b) {
    for (Eigen::Index k = 0; k < kf; ++k) {
      sin_y_(b - b_lo, k) = std::sin(pi * static_cast<double>((k + 1) * b) / static_cast<double>(cells));
    }
  }
  weight_.resize(kf, kf);
  for (Eigen::Index j = 0; j < kf; ++j) {
    for (Eigen::Index k = 0; k < kf; ++k) {
      const double jj = static_cast<double>(j + 1);
      const double kk = static_cast<double>(k + 1);
      const double eigenvalue = pi * pi * (jj * jj + kk * kk) / (side * side);
      weight_(j, k) = std::pow(eigenvalue, -spec.exponent);
    }
  }
  scale_ = (2.0 / side) * h * h;
}

double SobolevNorm::squared(const Field& field) const {
  if (&field.domain() != domain_ && field.size() != domain_->interior_count()) {
    throw std::invalid_argument("field does not belong to this domain");
  }
  return squared(field.values());
}

double SobolevNorm::squared(std::span<const double> values) const {
  if (values.size() != domain_->interior_count()) throw std::invalid_argument("field size mismatch");
  Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(sin_x_.rows(), sin_y_.rows());
  const auto points = domain_->interior_points();
  for (std::size_t v = 0; v < points.size(); ++v) {
    grid(points[v].i - domain_->i_min(), points[v].j - domain_->j_min()) = values[v];
  }
  const Eigen::MatrixXd coeff = scale_ * (sin_x_.transpose() * grid * sin_y_);
  return (weight_.array() * coeff.array().square()).sum();
}

double sobolev_norm(const Field& field, const SobolevSpec& spec) {
  return SobolevNorm(field.domain(), spec).squared(field);
}

}  // namespace gffexc
