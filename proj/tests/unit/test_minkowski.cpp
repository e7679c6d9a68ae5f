#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gffexc/grid_function.hpp"
#include "gffexc/minkowski.hpp"
#include "gffexc/replica.hpp"

using namespace gffexc;

namespace {

ExcursionCluster cluster_of(std::vector<VertexId> vertices) {
  ExcursionCluster c;
  c.vertices = std::move(vertices);
  c.id = c.vertices.empty() ? 0 : c.vertices.front();
  return c;
}

double brute_distance(const LatticeDomain& d, const ExcursionCluster& c, VertexId w) {
  double best = INFINITY;
  const Point p = d.position(w);
  for (VertexId v : c.vertices) {
    const Point q = d.position(v);
    best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
  }
  return best;
}

}  // namespace

TEST(DistanceTransform, SingletonIsExact) {
  const auto d = build_domain(DomainSpec(), 4);
  const VertexId centre = *d->interior_index({0, 0});
  const auto grid = distance_transform(cluster_of({centre}), *d);
  for (VertexId w = 0; w < d->interior_count(); ++w) {
    const Point p = d->position(w);
    EXPECT_NEAR(grid.distance[w], std::hypot(p.x, p.y), 1e-12);
  }
}

TEST(DistanceTransform, FullClusterIsZero) {
  const auto d = build_domain(DomainSpec(), 3);
  std::vector<VertexId> all(d->interior_count());
  for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
  const auto grid = distance_transform(cluster_of(all), *d);
  for (double x : grid.distance) EXPECT_EQ(x, 0.0);
}

TEST(DistanceTransform, MatchesBruteForceOnRandomClusters) {
  const auto d = build_domain(DomainSpec::parse("polygon(0:0, 2:0, 2:1, 1:1, 1:2, 0:2)"), 3);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<VertexId> members;
    for (VertexId v = 0; v < d->interior_count(); ++v) {
      if (rng() % 17 == 0 || (trial == 0 && members.empty())) members.push_back(v);
    }
    if (trial == 1) members = {3, 40};
    const auto c = cluster_of(members);
    const auto grid = distance_transform(c, *d);
    for (VertexId w = 0; w < d->interior_count(); ++w) {
      EXPECT_NEAR(grid.distance[w], brute_distance(*d, c, w), 1e-12);
      // 1-Lipschitz along lattice edges.
      for (const auto& nb : d->neighbors(w)) {
        if (!nb.boundary) {
          EXPECT_LE(std::abs(grid.distance[w] - grid.distance[nb.index]), d->mesh() + 1e-12);
        }
      }
    }
  }
}

TEST(DistanceTransform, EmptyClusterRejected) {
  const auto d = build_domain(DomainSpec(), 2);
  EXPECT_THROW(distance_transform(cluster_of({}), *d), std::invalid_argument);
}

TEST(Minkowski, SingletonCountsNineVertices) {
  const auto d = build_domain(DomainSpec(), 4);
  const double h = d->mesh();
  const VertexId centre = *d->interior_index({0, 0});
  const auto one = constant_function(*d, 1.0);
  const double r = 1.5 * h;
  const double expected = 0.5 * std::sqrt(std::abs(std::log(r))) * 9.0 * h * h;
  EXPECT_NEAR(minkowski_measure(cluster_of({centre}), *d, r, one), expected, 1e-14);
}

TEST(Minkowski, FullClusterAndZeroFunction) {
  const auto d = build_domain(DomainSpec(), 3);
  const double h = d->mesh();
  std::vector<VertexId> all(d->interior_count());
  for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
  const auto one = constant_function(*d, 1.0);
  for (double r : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(minkowski_measure(cluster_of(all), *d, r, one),
                0.5 * std::sqrt(std::abs(std::log(r))) * h * h * all.size(), 1e-12);
    EXPECT_EQ(minkowski_measure(cluster_of(all), *d, r, constant_function(*d, 0.0)), 0.0);
  }
}

TEST(Minkowski, GaugeUndefinedOutsideUnitInterval) {
  const auto d = build_domain(DomainSpec(), 3);
  const auto one = constant_function(*d, 1.0);
  for (double r : {0.0, -0.1, 1.0, 2.0}) {
    try {
      minkowski_measure(cluster_of({0}), *d, r, one);
      FAIL() << r;
    } catch (const std::domain_error& e) {
      EXPECT_STREQ(e.what(), "gauge undefined");
    }
  }
}

TEST(Minkowski, RawCountMonotoneAndLinear) {
  GreenOperator gop(build_domain(DomainSpec(), 5));
  const Replica rep = draw_replica(gop, 3, 0);
  const auto& big = rep.decomposition.clusters.front();
  const auto grid = distance_transform(big, gop.domain());
  std::size_t previous = 0;
  for (double r = 0.0; r < 1.0; r += 0.01) {
    const auto count = neighbourhood_count(grid, r);
    EXPECT_GE(count, previous);
    previous = count;
  }
  const auto f = make_grid_function(gop.domain(), NamedFunction::bump);
  const auto g = make_grid_function(gop.domain(), NamedFunction::halfplane);
  std::vector<double> mix(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) mix[v] = 2.0 * f[v] - 3.0 * g[v];
  const double r = 0.2;
  EXPECT_NEAR(minkowski_measure(grid, r, mix), 2.0 * minkowski_measure(grid, r, f) - 3.0 * minkowski_measure(grid, r, g),
              1e-12);
}

TEST(GaugeRatio, ScaleInvariantInFAndFlagsSubResolution) {
  GreenOperator gop(build_domain(DomainSpec(), 5));
  const Replica rep = draw_replica(gop, 4, 0);
  const double h = gop.domain().mesh();
  const std::vector<double> radii{2 * h, 4 * h, 8 * h};
  const auto& big = rep.decomposition.clusters.front();
  const auto a = gauge_ratio(big, rep.field, radii, constant_function(gop.domain(), 1.0));
  const auto b = gauge_ratio(big, rep.field, radii, constant_function(gop.domain(), 2.0));
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GT(a[i].ratio, 0.0);
    EXPECT_NEAR(a[i].ratio, b[i].ratio, 1e-12 * a[i].ratio);
  }
  const auto& single = rep.decomposition.clusters.back();
  ASSERT_EQ(single.vertices.size(), 1u);
  const auto s = gauge_ratio(single, rep.field, radii, constant_function(gop.domain(), 1.0));
  for (const auto& g : s) EXPECT_TRUE(g.sub_resolution);
}

TEST(GaugeRatio, ZeroFieldMassRejected) {
  const auto d = build_domain(DomainSpec(), 3);
  const Field f(d, std::vector<double>(d->interior_count(), 1.0));
  const std::vector<double> radii{0.3};
  try {
    gauge_ratio(cluster_of({0, 1}), f, radii, constant_function(*d, 0.0));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "zero field mass");
  }
}
