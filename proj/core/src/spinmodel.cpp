#include "gffexc/spinmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "gffexc/seeds.hpp"

namespace gffexc {

namespace {

void check_rho(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw std::domain_error("correlation outside [-1, 1]");
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> spin_scale(const GreenOperator& gop) {
  const auto diag = gop.diagonal();
  std::vector<double> out(diag.size());
  for (std::size_t v = 0; v < diag.size(); ++v) out[v] = kSpinScale * std::sqrt(diag[v]);
  return out;
}

SignCorrelationReport finish(SignCorrelationReport r, double sum, double sum_sq) {
  const double n = static_cast<double>(r.samples);
  r.empirical = sum / n;
  const double var = std::max(0.0, sum_sq / n - r.empirical * r.empirical);
  r.standard_error = std::sqrt(var / n);
  const double diff = r.empirical - r.exact;
  if (r.standard_error > 0.0) {
    r.z = diff / r.standard_error;
  } else {
    r.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  }
  return r;
}

}  // namespace

double sign_correlation_exact(double rho) {
  check_rho(rho);
  return 2.0 / std::numbers::pi * std::asin(rho);
}

double cross_moment_exact(double rho) {
  check_rho(rho);
  return std::sqrt(2.0 / std::numbers::pi) * rho;
}

SpinField rescaled_sign_field(const Field& field, const GreenOperator& gop) {
  if (&field.domain() != &gop.domain()) throw std::invalid_argument("field and operator domains differ");
  const auto scale = spin_scale(gop);
  SpinField s{field.domain_ptr(), std::vector<double>(field.size())};
  for (std::size_t v = 0; v < field.size(); ++v) s.values[v] = scale[v] * sign_of(field[static_cast<VertexId>(v)]);
  return s;
}

double spin_discrepancy_sample(const Field& field, std::span<const double> spin_scale_values,
                               std::span<const double> f) {
  const double h = field.domain().mesh();
  double acc = 0.0;
  for (std::size_t v = 0; v < field.size(); ++v) {
    const double phi = field[static_cast<VertexId>(v)];
    acc += f[v] * (phi - spin_scale_values[v] * sign_of(phi));
  }
  const double inner = h * h * acc;
  return inner * inner;
}

MeanEstimate spin_discrepancy(const GreenOperator& gop, std::span<const double> f, std::size_t samples,
                              std::uint64_t base_seed) {
  if (samples < 2) throw std::invalid_argument("spin_discrepancy requires at least 2 samples");
  if (f.size() != gop.domain().interior_count()) throw std::invalid_argument("test function size mismatch");
  const auto scale = spin_scale(gop);
  std::vector<double> values(samples);
  for_each_replica(samples, [&](std::size_t r) {
    Rng rng(derive_seed(base_seed, r, StreamTag::field));
    values[r] = spin_discrepancy_sample(gop.sample(rng), scale, f);
  });
  return mean_and_error(values);
}

double spin_discrepancy_exact(const GreenOperator& gop, std::span<const double> f) {
  const std::size_t n = gop.domain().interior_count();
  if (f.size() != n) throw std::invalid_argument("test function size mismatch");
  const auto diag = gop.diagonal();
  std::vector<double> root(n);
  for (std::size_t v = 0; v < n; ++v) root[v] = std::sqrt(diag[v]);
  double total = 0.0;
  for (VertexId w = 0; w < n; ++w) {
    if (f[w] == 0.0) continue;
    const auto col = gop.column(w);
    double acc = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (f[v] == 0.0) continue;
      const double rr = root[v] * root[w];
      const double rho = std::clamp(col[v] / rr, -1.0, 1.0);
      acc += f[v] * (rr * std::asin(rho) - col[v]);
    }
    total += f[w] * acc;
  }
  const double h = gop.domain().mesh();
  return std::pow(h, 4) * total;
}

SignCorrelationReport sign_covariance_identity_check(const GreenOperator& gop, VertexId v, VertexId w,
                                                     std::size_t samples, std::uint64_t base_seed) {
  if (v == w) throw std::invalid_argument("sign covariance check requires distinct vertices");
  const double gvw = gop.green(v, w);
  SignCorrelationReport r;
  r.rho = gvw / std::sqrt(gop.green(v, v) * gop.green(w, w));
  r.exact = sign_correlation_exact(std::clamp(r.rho, -1.0, 1.0));
  r.samples = samples;
  std::vector<double> prod(samples);
  for_each_replica(samples, [&](std::size_t i) {
    Rng rng(derive_seed(base_seed, i, StreamTag::field));
    const Field phi = gop.sample(rng);
    prod[i] = sign_of(phi[v]) * sign_of(phi[w]);
  });
  double sum = 0.0, sum_sq = 0.0;
  for (double p : prod) {
    sum += p;
    sum_sq += p * p;
  }
  return finish(r, sum, sum_sq);
}

namespace {

template <class Score>
SignCorrelationReport synthetic(double rho, double exact, std::size_t pairs, std::uint64_t seed, Score score) {
  check_rho(rho);
  SignCorrelationReport r;
  r.rho = rho;
  r.exact = exact;
  r.samples = pairs;
  Rng rng(derive_seed(seed, 0, StreamTag::synthetic));
  std::normal_distribution<double> normal;
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double x = normal(rng);
    const double y = rho * x + c * normal(rng);
    const double s = score(x, y);
    sum += s;
    sum_sq += s * s;
  }
  return finish(r, sum, sum_sq);
}

}  // namespace

SignCorrelationReport sign_correlation_mc(double rho, std::size_t pairs, std::uint64_t seed) {
  return synthetic(rho, sign_correlation_exact(rho), pairs, seed,
                   [](double x, double y) { return sign_of(x) * sign_of(y); });
}

SignCorrelationReport cross_moment_mc(double rho, std::size_t pairs, std::uint64_t seed) {
  return synthetic(rho, cross_moment_exact(rho), pairs, seed, [](double x, double y) { return x * sign_of(y); });
}

}  // namespace gffexc
