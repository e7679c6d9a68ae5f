#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gffexc/excursions.hpp"
#include "gffexc/grid_function.hpp"
#include "gffexc/replica.hpp"

using namespace gffexc;

namespace {

// Three interior vertices in a row at mesh 1/4: (1,1), (2,1), (3,1).
std::shared_ptr<const LatticeDomain> row_of_three() {
  return build_domain(DomainSpec(Rectangle{0.0, 0.0, 1.0, 0.5}), 2);
}

std::vector<EdgeState> closed_edges(const LatticeDomain& d) {
  std::vector<EdgeState> out(d.edges().size());
  for (std::size_t e = 0; e < out.size(); ++e) out[e].edge = static_cast<EdgeId>(e);
  return out;
}

EdgeId edge_between(const LatticeDomain& d, VertexId u, VertexId v) {
  for (const auto& nb : d.neighbors(u)) {
    if (!nb.boundary && nb.index == v) return nb.edge;
  }
  throw std::logic_error("not adjacent");
}

std::vector<EdgeState> all_interior_open(const LatticeDomain& d) {
  auto out = closed_edges(d);
  for (std::size_t e = 0; e < out.size(); ++e) out[e].omega = !d.edges()[e].to_boundary;
  return out;
}

}  // namespace

TEST(Decompose, ThreeVertexRowWithOpenEdge) {
  const auto d = row_of_three();
  ASSERT_EQ(d->interior_count(), 3u);
  const double h = d->mesh();
  const Field f(d, {1.0, 2.0, -1.0});
  auto open = closed_edges(*d);
  open[edge_between(*d, 0, 1)].omega = true;
  const auto dec = decompose(f, open);
  ASSERT_EQ(dec.size(), 2u);
  EXPECT_EQ(dec.clusters[0].vertices, (std::vector<VertexId>{0, 1}));
  EXPECT_EQ(dec.clusters[0].sign, 1);
  EXPECT_DOUBLE_EQ(dec.clusters[0].mass, 3 * h * h);
  EXPECT_DOUBLE_EQ(dec.clusters[0].diameter, h);
  EXPECT_EQ(dec.clusters[1].vertices, (std::vector<VertexId>{2}));
  EXPECT_EQ(dec.clusters[1].sign, -1);
  EXPECT_DOUBLE_EQ(dec.clusters[1].mass, h * h);
  EXPECT_DOUBLE_EQ(dec.clusters[1].diameter, 0.0);
}

TEST(Decompose, ThreeVertexRowClosedGivesSingletonsById) {
  const auto d = row_of_three();
  const Field f(d, {1.0, 2.0, -1.0});
  const auto dec = decompose(f, closed_edges(*d));
  ASSERT_EQ(dec.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(dec.clusters[k].id, k);
}

TEST(Decompose, OpenEdgeAcrossSignsIsInvalid) {
  const auto d = row_of_three();
  const Field f(d, {1.0, 2.0, -1.0});
  auto open = closed_edges(*d);
  open[edge_between(*d, 1, 2)].omega = true;
  try {
    decompose(f, open);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "invalid edge state");
  }
}

TEST(Decompose, AllPositiveAllOpenIsOneCluster) {
  const auto d = build_domain(DomainSpec(), 3);
  const Field f(d, std::vector<double>(d->interior_count(), 0.7));
  const auto dec = decompose(f, all_interior_open(*d));
  ASSERT_EQ(dec.size(), 1u);
  EXPECT_EQ(dec.clusters[0].vertices.size(), d->interior_count());
}

TEST(Decompose, DiscreteCheckerboardAndConstant) {
  const auto d = build_domain(DomainSpec(), 3);
  std::vector<double> v(d->interior_count());
  for (VertexId k = 0; k < v.size(); ++k) {
    const auto p = d->interior_point(k);
    v[k] = ((p.i + p.j) % 2 == 0) ? 1.5 : -0.5;
  }
  EXPECT_EQ(decompose_discrete(Field(d, v)).size(), d->interior_count());
  EXPECT_EQ(decompose_discrete(Field(d, std::vector<double>(v.size(), 2.0))).size(), 1u);
}

TEST(Decompose, SampledInvariants) {
  GreenOperator gop(build_domain(DomainSpec(), 5));
  for (std::size_t r = 0; r < 20; ++r) {
    const Replica rep = draw_replica(gop, 11, r);
    const auto& dec = rep.decomposition;
    const auto coarse = decompose_discrete(rep.field);
    std::vector<int> cover(rep.field.size(), 0);
    for (std::size_t k = 0; k < dec.size(); ++k) {
      const auto& c = dec.clusters[k];
      EXPECT_GT(c.mass, 0.0);
      EXPECT_EQ(c.id, c.vertices.front());
      const auto parent = coarse.cluster_of[c.vertices.front()];
      for (VertexId v : c.vertices) {
        ++cover[v];
        EXPECT_EQ(rep.field[v] > 0 ? 1 : -1, c.sign);
        EXPECT_EQ(dec.cluster_of[v], static_cast<std::int32_t>(k));
        // Metric clusters refine nearest-neighbour sign clusters.
        EXPECT_EQ(coarse.cluster_of[v], parent);
      }
      if (k > 0) {
        const auto& p = dec.clusters[k - 1];
        EXPECT_TRUE(p.diameter_sq_lattice > c.diameter_sq_lattice ||
                    (p.diameter_sq_lattice == c.diameter_sq_lattice && p.id < c.id));
      }
    }
    for (VertexId v = 0; v < cover.size(); ++v) EXPECT_EQ(cover[v], rep.field[v] != 0.0 ? 1 : 0);
    const Field back = reconstruct(dec, rep.field);
    for (VertexId v = 0; v < back.size(); ++v) EXPECT_NEAR(back[v], rep.field[v], 1e-12);
  }
}

TEST(Decompose, DiscoveryOrderDoesNotMatter) {
  GreenOperator gop(build_domain(DomainSpec(), 4));
  const Replica rep = draw_replica(gop, 5, 0);
  auto shuffled = rep.openings;
  std::mt19937 g(1);
  std::shuffle(shuffled.begin(), shuffled.end(), g);
  const auto again = decompose(rep.field, shuffled);
  ASSERT_EQ(again.size(), rep.decomposition.size());
  for (std::size_t k = 0; k < again.size(); ++k) {
    EXPECT_EQ(again.clusters[k].vertices, rep.decomposition.clusters[k].vertices);
  }
  EXPECT_EQ(again.cluster_of, rep.decomposition.cluster_of);
}

TEST(Measure, Examples) {
  const auto d = row_of_three();
  const double h = d->mesh();
  const Field f(d, {1.0, 2.0, -1.0});
  auto open = closed_edges(*d);
  open[edge_between(*d, 0, 1)].omega = true;
  const auto dec = decompose(f, open);
  const auto& c = dec.clusters[0];
  EXPECT_DOUBLE_EQ(evaluate_measure(c, f, constant_function(*d, 1.0)), c.mass);
  EXPECT_EQ(evaluate_measure(c, f, constant_function(*d, 0.0)), 0.0);
  // Half-plane x < 0.375 contains v1 only.
  const std::vector<double> half{1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(evaluate_measure(c, f, half), h * h * 1.0);
}

TEST(Reconstruct, ExamplesAndPartialSums) {
  const auto d = row_of_three();
  const Field f(d, {1.0, 2.0, -1.0});
  auto open = closed_edges(*d);
  open[edge_between(*d, 0, 1)].omega = true;
  const auto dec = decompose(f, open);
  const Field back = reconstruct(dec, f);
  EXPECT_EQ(back[0], 1.0);
  EXPECT_EQ(back[1], 2.0);
  EXPECT_EQ(back[2], -1.0);
  const Field none = partial_sum(dec, f, 0);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(none[v], 0.0);
  const Field one = partial_sum(dec, f, 1);
  EXPECT_EQ(one[0], 1.0);
  EXPECT_EQ(one[1], 2.0);
  EXPECT_EQ(one[2], 0.0);
  const Field all = partial_sum(dec, f, 99);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(all[v], back[v]);

  const auto zero = Field::zeros(d);
  const auto zdec = decompose(zero, closed_edges(*d));
  EXPECT_EQ(zdec.size(), 0u);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(reconstruct(zdec, zero)[v], 0.0);
}

TEST(PathHits, Examples) {
  const auto d = row_of_three();
  const Field f(d, {1.0, 2.0, -1.0});
  auto open = closed_edges(*d);
  open[edge_between(*d, 0, 1)].omega = true;
  const auto dec = decompose(f, open);
  const VertexId first[] = {0};
  const auto hits = clusters_hitting_path(dec, first);
  EXPECT_EQ(hits.clusters, (std::vector<std::size_t>{0}));
  EXPECT_EQ(hits.vertices, (std::vector<VertexId>{0, 1}));

  const auto zero = Field::zeros(d);
  const auto zdec = decompose(zero, closed_edges(*d));
  const VertexId path[] = {0, 1};
  const auto none = clusters_hitting_path(zdec, path);
  EXPECT_TRUE(none.clusters.empty());
  EXPECT_EQ(none.vertices, (std::vector<VertexId>{0, 1}));

  const VertexId gap[] = {0, 2};
  EXPECT_THROW(clusters_hitting_path(dec, gap), std::invalid_argument);

  const auto big = build_domain(DomainSpec(), 3);
  const Field pos(big, std::vector<double>(big->interior_count(), 1.0));
  const auto one = decompose(pos, all_interior_open(*big));
  const VertexId corner[] = {0, 1, 2};
  EXPECT_EQ(clusters_hitting_path(one, corner).clusters, (std::vector<std::size_t>{0}));
}

TEST(Diameter, HullMatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(-40, 40);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LatticePoint> pts(1 + trial % 60);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    std::int64_t best = 0;
    for (const auto& a : pts) {
      for (const auto& b : pts) {
        const std::int64_t dx = a.i - b.i, dy = a.j - b.j;
        best = std::max(best, dx * dx + dy * dy);
      }
    }
    EXPECT_EQ(lattice_diameter_squared(pts), best);
  }
  const std::vector<LatticePoint> line{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}, {7, 0},
                                       {8, 0}, {9, 0}, {10, 0}, {11, 0}, {12, 0}, {13, 0}, {14, 0}, {15, 0}, {16, 0}};
  EXPECT_EQ(lattice_diameter_squared(line), 256);
}

TEST(Raster, HeaderAndLabels) {
  const auto d = row_of_three();
  const Field f(d, {1.0, 2.0, -1.0});
  const auto dec = decompose(f, closed_edges(*d));
  std::ostringstream os;
  write_cluster_raster(os, dec);
  EXPECT_EQ(os.str(), "P2\n3 1\n3\n1 2 3\n");
}
