#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gffexc/excursions.hpp"
#include "gffexc/replica.hpp"

namespace gffexc {

/// Square annulus between the contours S_a = boundary of (-a, a)^2 and S_b.
struct AnnulusSpec {
  double a = 0.3;
  double b = 0.6;
};

/// Throws std::invalid_argument unless 0 < a <= b < 1.
void validate(const AnnulusSpec& spec);

struct CrossingEstimate {
  double p_hat = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  /// Binomial standard error sqrt(p(1-p)/M).
  double standard_error() const;
};

/// Wilson score interval for `hits` successes out of `trials`.
CrossingEstimate wilson_estimate(std::size_t hits, std::size_t trials, double z = 1.959964);

/// True iff a single cluster, restricted to the closed annulus
/// a - h/2 <= |v|_inf <= b + h/2, has a component (open edges in metric mode,
/// equal-sign neighbours in discrete mode) touching |v|_inf <= a + h/2 and
/// |v|_inf >= b - h/2. `openings` may be empty in discrete mode.
/// Throws std::invalid_argument unless the domain is (-1, 1)^2.
bool crosses(const Decomposition& decomposition, std::span<const EdgeState> openings, const AnnulusSpec& spec);

/// crosses() for several annuli on one sample.
std::vector<bool> crossing_events(const Decomposition& decomposition, std::span<const EdgeState> openings,
                                  std::span<const AnnulusSpec> specs);

/// Result of evaluating several annuli on the same replicas.
struct CrossingScan {
  std::vector<AnnulusSpec> specs;
  std::vector<CrossingEstimate> estimates;
  /// Samples where some (a, b) crossed but (a, b') with b' < b did not.
  std::size_t monotonicity_violations = 0;
  /// Samples where some (a, a) failed to cross.
  std::size_t diagonal_failures = 0;
};

/// Monte Carlo over replicas 0..M-1 of `base_seed`; every annulus is scored
/// on the same samples.
CrossingScan estimate_crossings(const GreenOperator& gop, std::span<const AnnulusSpec> specs, std::size_t samples,
                                std::uint64_t base_seed);

CrossingEstimate estimate(const GreenOperator& gop, const AnnulusSpec& spec, std::size_t samples,
                          std::uint64_t base_seed);

struct ContinuityRow {
  int n = 0;
  AnnulusSpec spec;
  CrossingEstimate estimate;
  std::uint64_t seed0 = 0;
};

struct ContinuityScan {
  std::vector<ContinuityRow> rows;  // n-major, then a, then b
  std::vector<int> levels;
  /// Per level: max |p(a, b) - p(a, b_next)| over consecutive grid columns.
  std::vector<double> max_shift_difference;
  std::size_t monotonicity_violations = 0;
  std::size_t diagonal_failures = 0;
};

/// Estimates on the product grid a_grid x b_grid (pairs with a > b skipped)
/// for every level, on the domain (-1, 1)^2.
ContinuityScan continuity_scan(std::span<const double> a_grid, std::span<const double> b_grid,
                               std::span<const int> levels, std::size_t samples, std::uint64_t base_seed,
                               GreenCache& cache);

/// The standard domain (-1, 1)^2.
DomainSpec standard_square();

}  // namespace gffexc
