#include "gffexc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gffexc {

double open_probability(double a, double b) {
  const double product = a * b;
  if (!(product > 0.0)) return 0.0;
  // Saturates below 1 so every edge keeps a positive chance to close.
  return std::min(-std::expm1(-2.0 * product), std::nextafter(1.0, 0.0));
}

std::vector<EdgeState> sample_openings(const Field& field, Rng& rng) {
  const auto edges = field.domain().edges();
  std::vector<EdgeState> states(edges.size());
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    const double a = field[edge.from];
    const double b = edge.to_boundary ? 0.0 : field[edge.to];
    EdgeState& s = states[e];
    s.edge = static_cast<EdgeId>(e);
    s.coupling = std::abs(a * b);
    s.p = edge.to_boundary ? 0.0 : open_probability(a, b);
    // One uniform per edge keeps the stream aligned with the edge index.
    s.omega = uniform(rng) < s.p;
  }
  return states;
}

BridgeHitEstimate bridge_hit_mc(double a, double b, std::size_t steps, std::size_t reps, Rng& rng) {
  if (steps < 1 || reps < 1) throw std::invalid_argument("bridge_hit_mc needs steps >= 1 and reps >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dt = 1.0 / static_cast<double>(steps);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    double x = a;
    double avoid = 1.0;
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) * dt;
      double next = b;
      if (i + 1 < steps) {
        const double remaining = 1.0 - t;
        const double mean = x + (b - x) * dt / remaining;
        const double var = dt * (remaining - dt) / remaining;
        next = mean + std::sqrt(var) * normal(rng);
      }
      if (x * next > 0.0) {
        avoid *= -std::expm1(-2.0 * x * next / dt);
      } else {
        avoid = 0.0;
      }
      x = next;
    }
    const double hit = 1.0 - avoid;
    sum += hit;
    sum_sq += hit * hit;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  const double var = reps > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), reps};
}

double sample_first_zero(double a, double b, Rng& rng) {
  if (a == 0.0) throw std::invalid_argument("first zero undefined for a bridge starting at 0");
  const double start = std::abs(a);
  const double end = std::abs(b);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z = normal(rng);
  double u = 0.0;
  if (end == 0.0) {
    u = start * start / std::max(z * z, 1e-300);
  } else {
    // Michael-Schucany-Haas sampler for IG(mu, shape), in cancellation-free form.
    const double mu = start / end;
    const double shape = start * start;
    const double y = z * z;
    const double root = std::sqrt(4.0 * mu * shape * y + mu * mu * y * y);
    const double x = mu - 2.0 * mu * mu * y / (root + mu * y);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    u = uniform(rng) <= mu / (mu + x) ? x : mu * mu / x;
  }
  return u / (1.0 + u);
}

}  // namespace gffexc
