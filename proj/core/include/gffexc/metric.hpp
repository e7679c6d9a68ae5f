#pragma once

#include <cstddef>
#include <vector>

#include "gffexc/lattice.hpp"

namespace gffexc {

/// Probability that the unit-time Brownian bridge from a to b keeps one sign:
/// 1 - exp(-2ab) when ab > 0, otherwise 0. Always in [0, 1).
double open_probability(double a, double b);

/// Opening state of one lattice edge given the vertex values.
struct EdgeState {
  EdgeId edge = 0;
  bool omega = false;  // 1 = the metric field keeps one sign along the edge
  double p = 0.0;      // opening probability
  double coupling = 0.0;  // |phi_v * phi_w|
};

/// Independent Bernoulli(p_e) openings for every edge of the field's domain,
/// in domain edge order. Edges to boundary vertices are always closed.
std::vector<EdgeState> sample_openings(const Field& field, Rng& rng);

struct BridgeHitEstimate {
  double p_hit = 0.0;
  double standard_error = 0.0;
  std::size_t reps = 0;
};

/// Monte Carlo estimate of P(bridge from a to b over unit time hits 0).
///
/// Each rep samples the bridge exactly at `steps` equally spaced times and
/// scores 1 - prod_i (1 - exp(-2 x_i x_{i+1} / dt)) over same-sign
/// consecutive pairs (0 if any pair changes sign). The score is the
/// conditional hitting probability given the skeleton, so the mean is
/// unbiased for every `steps` >= 1.
BridgeHitEstimate bridge_hit_mc(double a, double b, std::size_t steps, std::size_t reps, Rng& rng);

/// Time of the first zero, measured from the `a` end, of a unit-time bridge
/// from a to b conditioned to hit zero. Requires a != 0.
///
/// With u = t / (1 - t) the hitting-time density becomes proportional to
/// u^{-3/2} exp(-a^2 / (2u) - b^2 u / 2), an inverse Gaussian law with mean
/// |a|/|b| and shape a^2 (a Levy law when b = 0).
double sample_first_zero(double a, double b, Rng& rng);

}  // namespace gffexc
