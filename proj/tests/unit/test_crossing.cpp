#include <gtest/gtest.h>

#include <cmath>

#include "gffexc/crossing.hpp"

using namespace gffexc;

namespace {

std::vector<EdgeState> openings(const LatticeDomain& d, bool open) {
  std::vector<EdgeState> out(d.edges().size());
  for (std::size_t e = 0; e < out.size(); ++e) {
    out[e].edge = static_cast<EdgeId>(e);
    out[e].omega = open && !d.edges()[e].to_boundary;
  }
  return out;
}

}  // namespace

TEST(Annulus, Validation) {
  EXPECT_NO_THROW(validate({0.3, 0.3}));
  EXPECT_THROW(validate({0.0, 0.3}), std::invalid_argument);
  EXPECT_THROW(validate({0.5, 0.3}), std::invalid_argument);
  EXPECT_THROW(validate({0.3, 1.0}), std::invalid_argument);
}

TEST(Crosses, SpanningClusterCrossesEverything) {
  const auto d = build_domain(standard_square(), 4);
  const Field f(d, std::vector<double>(d->interior_count(), 1.0));
  const auto open = openings(*d, true);
  const auto dec = decompose(f, open);
  for (double a : {0.1, 0.3, 0.5}) {
    for (double b : {0.5, 0.7, 0.9}) {
      if (a <= b) {
        EXPECT_TRUE(crosses(dec, open, {a, b})) << a << "," << b;
      }
    }
  }
}

TEST(Crosses, SingletonsCannotSpan) {
  const auto d = build_domain(standard_square(), 4);
  const Field f(d, std::vector<double>(d->interior_count(), 1.0));
  const auto closed = openings(*d, false);
  const auto dec = decompose(f, closed);
  EXPECT_FALSE(crosses(dec, closed, {0.3, 0.3 + 3 * d->mesh()}));
  EXPECT_TRUE(crosses(dec, closed, {0.3, 0.3}));
}

TEST(Crosses, RequiresStandardSquare) {
  const auto d = build_domain(DomainSpec(Rectangle{0, 0, 1, 1}), 3);
  const Field f(d, std::vector<double>(d->interior_count(), 1.0));
  const auto open = openings(*d, true);
  EXPECT_THROW(crosses(decompose(f, open), open, {0.3, 0.5}), std::invalid_argument);
}

TEST(Crosses, SpokeCrossesOnlyWhenUnbroken) {
  const auto d = build_domain(standard_square(), 3);
  const double h = d->mesh();
  auto spoke = [&](int gap) {
    std::vector<double> v(d->interior_count(), 0.0);
    for (VertexId k = 0; k < v.size(); ++k) {
      const auto p = d->interior_point(k);
      if (p.i == 0 && p.j <= 0 && p.j != gap) v[k] = 1.0;
    }
    return Field(d, v);
  };
  const AnnulusSpec spec{2 * h, 5 * h};
  EXPECT_TRUE(crosses(decompose_discrete(spoke(1)), {}, spec));
  EXPECT_FALSE(crosses(decompose_discrete(spoke(-3)), {}, spec));
}

TEST(Wilson, IntervalContainsEstimate) {
  for (std::size_t hits : {0u, 1u, 37u, 99u, 100u}) {
    const auto e = wilson_estimate(hits, 100);
    EXPECT_LE(e.ci_low, e.p_hat);
    EXPECT_GE(e.ci_high, e.p_hat);
    EXPECT_GE(e.ci_low, 0.0);
    EXPECT_LE(e.ci_high, 1.0);
  }
}

TEST(Wilson, CoverageOnFairCoin) {
  Rng rng(12);
  std::bernoulli_distribution coin(0.5);
  int covered = 0;
  for (int batch = 0; batch < 100; ++batch) {
    std::size_t hits = 0;
    for (int i = 0; i < 200; ++i) hits += coin(rng);
    const auto e = wilson_estimate(hits, 200);
    if (e.ci_low <= 0.5 && 0.5 <= e.ci_high) ++covered;
  }
  EXPECT_GE(covered, 90);
}

TEST(Estimate, DiagonalAndMonotonicityPerSample) {
  GreenOperator gop(build_domain(standard_square(), 4));
  const std::vector<AnnulusSpec> specs{{0.3, 0.3}, {0.3, 0.45}, {0.3, 0.6}, {0.3, 0.8}, {0.5, 0.5}, {0.5, 0.9}};
  const auto scan = estimate_crossings(gop, specs, 60, 21);
  EXPECT_EQ(scan.diagonal_failures, 0u);
  EXPECT_EQ(scan.monotonicity_violations, 0u);
  EXPECT_EQ(scan.estimates[0].p_hat, 1.0);
  EXPECT_EQ(scan.estimates[4].p_hat, 1.0);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(scan.estimates[i].p_hat, scan.estimates[i - 1].p_hat);
  const auto single = estimate(gop, specs[2], 60, 21);
  EXPECT_EQ(single.hits, scan.estimates[2].hits);
}

TEST(Estimate, ContinuityScanShape) {
  GreenCache cache;
  const std::vector<double> a{0.2, 0.3, 0.4}, b{0.5, 0.6, 0.7};
  const std::vector<int> levels{3, 4};
  const auto scan = continuity_scan(a, b, levels, 10, 1, cache);
  EXPECT_EQ(scan.rows.size(), 18u);
  EXPECT_EQ(scan.max_shift_difference.size(), 2u);
  EXPECT_EQ(scan.diagonal_failures, 0u);
  EXPECT_EQ(scan.monotonicity_violations, 0u);
}
