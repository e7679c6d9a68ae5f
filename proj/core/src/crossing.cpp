#include "gffexc/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "gffexc/union_find.hpp"

namespace gffexc {

void validate(const AnnulusSpec& spec) {
  if (!(spec.a > 0.0 && spec.a <= spec.b && spec.b < 1.0)) {
    throw std::invalid_argument("annulus requires 0 < a <= b < 1");
  }
}

double CrossingEstimate::standard_error() const {
  if (samples == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(samples));
}

CrossingEstimate wilson_estimate(std::size_t hits, std::size_t trials, double z) {
  CrossingEstimate out;
  out.samples = trials;
  out.hits = hits;
  if (trials == 0) {
    out.ci_high = 1.0;
    return out;
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  out.p_hat = p;
  out.ci_low = std::clamp(centre - half, 0.0, p);
  out.ci_high = std::clamp(centre + half, p, 1.0);
  return out;
}

DomainSpec standard_square() { return DomainSpec(Rectangle{-1.0, -1.0, 1.0, 1.0}); }

namespace {

void require_standard_square(const LatticeDomain& domain) {
  const Rectangle box = domain.bounding_box();
  if (!domain.shape().is_rectangle() || box.x0 != -1.0 || box.y0 != -1.0 || box.x1 != 1.0 || box.y1 != 1.0) {
    throw std::invalid_argument("crossing estimator requires the domain (-1,1)^2");
  }
}

// Same-cluster adjacency used for connectivity inside the annulus.
std::vector<std::pair<VertexId, VertexId>> cluster_links(const Decomposition& d,
                                                         std::span<const EdgeState> openings) {
  const LatticeDomain& domain = *d.domain;
  std::vector<std::pair<VertexId, VertexId>> links;
  const auto edges = domain.edges();
  if (d.mode == DecompositionMode::metric) {
    if (openings.size() != edges.size()) throw std::invalid_argument("invalid edge state");
    for (const EdgeState& s : openings) {
      if (!s.omega) continue;
      const Edge& e = edges[s.edge];
      if (e.to_boundary) throw std::invalid_argument("invalid edge state");
      links.emplace_back(e.from, e.to);
    }
  } else {
    for (const Edge& e : edges) {
      if (e.to_boundary) continue;
      const auto cu = d.cluster_of[e.from];
      if (cu >= 0 && cu == d.cluster_of[e.to]) links.emplace_back(e.from, e.to);
    }
  }
  return links;
}

bool crosses_with_links(const Decomposition& d, const std::vector<std::pair<VertexId, VertexId>>& links,
                        const AnnulusSpec& spec) {
  validate(spec);
  const LatticeDomain& domain = *d.domain;
  const double h = domain.mesh();
  // Work in units of half a lattice step so every threshold is an integer.
  const double inv = 2.0 / h;
  const double lo = spec.a * inv - 1.0;   // a - h/2
  const double hi = spec.b * inv + 1.0;   // b + h/2
  const double inner = spec.a * inv + 1.0;  // a + h/2
  const double outer = spec.b * inv - 1.0;  // b - h/2
  const auto pts = domain.interior_points();
  auto radius2 = [&](VertexId v) {
    return 2.0 * std::max(std::abs(pts[v].i), std::abs(pts[v].j));
  };
  auto in_annulus = [&](VertexId v) {
    const double r = radius2(v);
    return d.cluster_of[v] >= 0 && r >= lo && r <= hi;
  };

  DisjointSets sets(pts.size());
  for (const auto& [u, v] : links) {
    if (in_annulus(u) && in_annulus(v)) sets.unite(u, v);
  }
  std::vector<std::uint8_t> flags(pts.size(), 0);
  for (VertexId v = 0; v < pts.size(); ++v) {
    if (!in_annulus(v)) continue;
    const double r = radius2(v);
    std::uint8_t f = 0;
    if (r <= inner) f |= 1;
    if (r >= outer) f |= 2;
    if (f == 0) continue;
    const auto root = sets.find(v);
    flags[root] |= f;
    if (flags[root] == 3) return true;
  }
  return false;
}

}  // namespace

bool crosses(const Decomposition& decomposition, std::span<const EdgeState> openings, const AnnulusSpec& spec) {
  require_standard_square(*decomposition.domain);
  return crosses_with_links(decomposition, cluster_links(decomposition, openings), spec);
}

std::vector<bool> crossing_events(const Decomposition& decomposition, std::span<const EdgeState> openings,
                                  std::span<const AnnulusSpec> specs) {
  require_standard_square(*decomposition.domain);
  const auto links = cluster_links(decomposition, openings);
  std::vector<bool> out;
  out.reserve(specs.size());
  for (const AnnulusSpec& s : specs) out.push_back(crosses_with_links(decomposition, links, s));
  return out;
}

CrossingScan estimate_crossings(const GreenOperator& gop, std::span<const AnnulusSpec> specs, std::size_t samples,
                                std::uint64_t base_seed) {
  require_standard_square(gop.domain());
  for (const auto& s : specs) validate(s);
  std::vector<std::vector<bool>> events(samples);
  for_each_replica(samples, [&](std::size_t r) {
    const Replica rep = draw_replica(gop, base_seed, r);
    events[r] = crossing_events(rep.decomposition, rep.openings, specs);
  });

  CrossingScan scan;
  scan.specs.assign(specs.begin(), specs.end());
  std::vector<std::size_t> hits(specs.size(), 0);
  for (const auto& ev : events) {
    bool monotone = true;
    bool diagonal = true;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (ev[i]) ++hits[i];
      if (specs[i].a == specs[i].b && !ev[i]) diagonal = false;
      for (std::size_t j = 0; j < specs.size(); ++j) {
        if (specs[i].a == specs[j].a && specs[j].b < specs[i].b && ev[i] && !ev[j]) monotone = false;
      }
    }
    if (!monotone) ++scan.monotonicity_violations;
    if (!diagonal) ++scan.diagonal_failures;
  }
  for (std::size_t i = 0; i < specs.size(); ++i) scan.estimates.push_back(wilson_estimate(hits[i], samples));
  return scan;
}

CrossingEstimate estimate(const GreenOperator& gop, const AnnulusSpec& spec, std::size_t samples,
                          std::uint64_t base_seed) {
  const AnnulusSpec specs[] = {spec};
  return estimate_crossings(gop, specs, samples, base_seed).estimates.front();
}

ContinuityScan continuity_scan(std::span<const double> a_grid, std::span<const double> b_grid,
                               std::span<const int> levels, std::size_t samples, std::uint64_t base_seed,
                               GreenCache& cache) {
  std::vector<AnnulusSpec> specs;
  for (double a : a_grid) {
    for (double b : b_grid) {
      if (a <= b) specs.push_back({a, b});
    }
  }
  ContinuityScan out;
  for (int n : levels) {
    const auto gop = cache.get(standard_square(), n);
    const CrossingScan scan = estimate_crossings(*gop, specs, samples, base_seed);
    out.levels.push_back(n);
    out.monotonicity_violations += scan.monotonicity_violations;
    out.diagonal_failures += scan.diagonal_failures;
    double worst = 0.0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      out.rows.push_back({n, specs[i], scan.estimates[i], base_seed});
      if (i + 1 < specs.size() && specs[i + 1].a == specs[i].a) {
        worst = std::max(worst, std::abs(scan.estimates[i].p_hat - scan.estimates[i + 1].p_hat));
      }
    }
    out.max_shift_difference.push_back(worst);
  }
  return out;
}

}  // namespace gffexc
