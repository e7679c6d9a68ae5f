#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "gffexc/lattice.hpp"
#include "gffexc/replica.hpp"

namespace gffexc {

/// c1 = sqrt(pi/2), the inverse of E|Y| for a standard Gaussian Y.
inline const double kSpinScale = std::sqrt(std::numbers::pi / 2.0);

/// E[sign X sign Y] = (2/pi) arcsin(rho) for a unit-variance Gaussian pair.
/// Throws std::domain_error if |rho| > 1.
double sign_correlation_exact(double rho);

/// E[X sign Y] = sqrt(2/pi) rho for a unit-variance Gaussian pair.
/// Throws std::domain_error if |rho| > 1.
double cross_moment_exact(double rho);

/// s(v) = c1 sqrt(G(v,v)) sign(phi_v).
struct SpinField {
  std::shared_ptr<const LatticeDomain> domain;
  std::vector<double> values;
};

SpinField rescaled_sign_field(const Field& field, const GreenOperator& gop);

/// Monte Carlo mean and standard error of (phi - s, f)^2 with inner product
/// h^2 sum_v. Requires samples >= 2.
MeanEstimate spin_discrepancy(const GreenOperator& gop, std::span<const double> f, std::size_t samples,
                              std::uint64_t base_seed);

/// Per-sample (phi - s, f)^2.
double spin_discrepancy_sample(const Field& field, std::span<const double> spin_scale, std::span<const double> f);

/// E[(phi - s, f)^2] in closed form:
///   h^4 sum_{v,w} f_v f_w [ sqrt(G_vv G_ww) arcsin(rho_vw) - G_vw ],
/// which follows from the two Gaussian identities above with c1 sqrt(2/pi) = 1.
/// Costs one solve per vertex in the support of f.
double spin_discrepancy_exact(const GreenOperator& gop, std::span<const double> f);

struct SignCorrelationReport {
  double rho = 0.0;
  double empirical = 0.0;
  double exact = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  std::size_t samples = 0;
};

/// Empirical E[sign phi_v sign phi_w] from field samples against
/// (2/pi) arcsin(G_vw / sqrt(G_vv G_ww)). Requires v != w.
SignCorrelationReport sign_covariance_identity_check(const GreenOperator& gop, VertexId v, VertexId w,
                                                     std::size_t samples, std::uint64_t base_seed);

/// Same comparison on synthetic unit-variance pairs with correlation rho.
SignCorrelationReport sign_correlation_mc(double rho, std::size_t pairs, std::uint64_t seed);

/// Empirical E[X sign Y] on synthetic pairs against sqrt(2/pi) rho.
SignCorrelationReport cross_moment_mc(double rho, std::size_t pairs, std::uint64_t seed);

}  // namespace gffexc
