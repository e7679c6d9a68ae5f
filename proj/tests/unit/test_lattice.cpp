#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <queue>

#include <Eigen/Dense>

#include "gffexc/lattice.hpp"
#include "gffexc/sparse_cholesky.hpp"

using namespace gffexc;

namespace {

// Interior is the single vertex (1, 1) at mesh 1/4.
DomainSpec single_vertex() { return DomainSpec::square(0.5, {0.25, 0.25}); }
// Interior is the two vertices (1, 1) and (2, 1) at mesh 1/4.
DomainSpec two_vertices() { return DomainSpec(Rectangle{0.0, 0.0, 0.75, 0.5}); }

Eigen::MatrixXd dense_laplacian(const LatticeDomain& d) {
  const auto n = static_cast<Eigen::Index>(d.interior_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    a(v, v) = 4.0;
    for (const auto& nb : d.neighbors(static_cast<VertexId>(v))) {
      if (!nb.boundary) a(v, nb.index) = -1.0;
    }
  }
  return a;
}

}  // namespace

TEST(Domain, UnitSquareQuarterMeshHasNineInteriorVertices) {
  const auto d = build_domain(DomainSpec(Rectangle{0, 0, 1, 1}), 2);
  EXPECT_EQ(d->interior_count(), 9u);
  EXPECT_EQ(d->grid_width(), 3);
  EXPECT_EQ(d->grid_height(), 3);
}

TEST(Domain, StandardSquareCountMatchesEnumeration) {
  for (int n = 2; n <= 6; ++n) {
    const auto d = build_domain(DomainSpec(), n);
    const double h = std::ldexp(1.0, -n);
    std::size_t count = 0;
    for (int i = -(1 << (n + 1)); i <= (1 << (n + 1)); ++i) {
      for (int j = -(1 << (n + 1)); j <= (1 << (n + 1)); ++j) {
        if (std::abs(i * h) < 1.0 && std::abs(j * h) < 1.0) ++count;
      }
    }
    EXPECT_EQ(d->interior_count(), count) << "n=" << n;
    const std::size_t side = (std::size_t{1} << (n + 1)) - 1;
    EXPECT_EQ(count, side * side);
  }
}

TEST(Domain, TooSmallShapeIsDegenerate) {
  try {
    build_domain(DomainSpec::square(0.125, {0.375, 0.375}), 2);
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "degenerate domain");
  }
}

TEST(Domain, LevelBelowTwoRejected) { EXPECT_THROW(build_domain(DomainSpec(), 1), std::invalid_argument); }

TEST(Domain, StructuralInvariants) {
  for (const auto& shape : {DomainSpec(), DomainSpec::parse("polygon(0:0, 2:0, 2:1, 1:1, 1:2, 0:2)"),
                            DomainSpec::parse("rect(x0=-0.5, y0=0, x1=1.5, y1=0.75)")}) {
    const auto d = build_domain(shape, 4);
    std::vector<int> degree(d->interior_count(), 0);
    for (const auto& e : d->edges()) {
      ++degree[e.from];
      if (!e.to_boundary) ++degree[e.to];
    }
    for (int k : degree) EXPECT_EQ(k, 4);
    for (const auto& b : d->boundary_points()) EXPECT_FALSE(d->interior_index(b).has_value());
    for (VertexId v = 0; v < d->interior_count(); ++v) {
      EXPECT_TRUE(shape.contains_strictly(d->position(v)));
      if (v > 0) {
        EXPECT_LT(d->interior_point(v - 1), d->interior_point(v));
      }
    }
    std::vector<bool> seen(d->interior_count(), false);
    std::queue<VertexId> q;
    q.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (const auto& nb : d->neighbors(v)) {
        if (nb.boundary || seen[nb.index]) continue;
        seen[nb.index] = true;
        ++reached;
        q.push(nb.index);
      }
    }
    EXPECT_EQ(reached, d->interior_count());
  }
}

TEST(Domain, ParseRoundTrip) {
  const auto s = DomainSpec::parse("square(side=2.0, center=0,0)");
  const Rectangle b = s.bounding_box();
  EXPECT_DOUBLE_EQ(b.x0, -1.0);
  EXPECT_DOUBLE_EQ(b.y1, 1.0);
  const auto again = DomainSpec::parse(s.to_string());
  EXPECT_EQ(again.to_string(), s.to_string());
  EXPECT_THROW(DomainSpec::parse("circle(1)"), std::invalid_argument);
}

TEST(Green, SingleInteriorVertexIsQuarter) {
  GreenOperator gop(build_domain(single_vertex(), 2));
  ASSERT_EQ(gop.domain().interior_count(), 1u);
  EXPECT_NEAR(gop.green(0, 0), 0.25, 1e-12);
}

TEST(Green, TwoVertexInverseByHand) {
  GreenOperator gop(build_domain(two_vertices(), 2));
  ASSERT_EQ(gop.domain().interior_count(), 2u);
  EXPECT_NEAR(gop.green(0, 0), 4.0 / 15.0, 1e-12);
  EXPECT_NEAR(gop.green(1, 1), 4.0 / 15.0, 1e-12);
  EXPECT_NEAR(gop.green(0, 1), 1.0 / 15.0, 1e-12);
  EXPECT_NEAR(gop.green(1, 0), 1.0 / 15.0, 1e-12);
}

TEST(Green, NonInteriorVertexIsIndexError) {
  GreenOperator gop(build_domain(two_vertices(), 2));
  EXPECT_THROW(gop.green(0, 2), std::out_of_range);
  EXPECT_THROW(gop.column(7), std::out_of_range);
}

TEST(Green, MatchesDenseInverseSymmetricNonnegative) {
  GreenOperator gop(build_domain(DomainSpec::parse("polygon(0:0, 2:0, 2:1, 1:1, 1:2, 0:2)"), 3));
  const Eigen::MatrixXd inv = dense_laplacian(gop.domain()).inverse();
  const auto n = gop.domain().interior_count();
  for (VertexId w = 0; w < n; w += 3) {
    const auto col = gop.column(w);
    for (VertexId v = 0; v < n; ++v) {
      EXPECT_NEAR(col[v], inv(v, w), 1e-12);
      EXPECT_GE(col[v], 0.0);
      EXPECT_NEAR(gop.green(v, w), gop.green(w, v), 1e-12 * std::abs(gop.green(v, w)));
    }
  }
}

TEST(Green, SelectedInversionDiagonalMatchesColumnSolves) {
  for (const auto& shape : {DomainSpec(), DomainSpec::parse("polygon(0:0, 2:0, 2:1, 1:1, 1:2, 0:2)"),
                            DomainSpec::parse("rect(x0=0, y0=0, x1=1.5, y1=0.5)")}) {
    GreenOperator gop(build_domain(shape, 4));
    const auto diag = gop.diagonal();
    for (VertexId v = 0; v < gop.domain().interior_count(); ++v) {
      EXPECT_NEAR(diag[v], gop.green(v, v), 1e-12) << shape.to_string() << " v=" << v;
    }
  }
}

TEST(Green, CentreVarianceIncrementsFollowLogNormalization) {
  const double target = std::numbers::ln2 / (2.0 * std::numbers::pi);
  double previous = 0.0;
  for (int n = 4; n <= 7; ++n) {
    GreenOperator gop(build_domain(DomainSpec(Rectangle{0, 0, 1, 1}), n));
    const auto centre = *gop.domain().interior_index({1 << (n - 1), 1 << (n - 1)});
    const double var = gop.green(centre, centre);
    if (n > 4) {
      EXPECT_NEAR(var - previous, target, 0.2 * target) << "n=" << n;
    }
    previous = var;
  }
}

TEST(Factor, NonPositiveDefiniteFails) {
  SparseCholesky::Matrix m(2, 2);
  m.insert(0, 0) = 1.0;
  m.insert(1, 1) = -1.0;
  try {
    SparseCholesky chol(m);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "factorization failed");
  }
}

TEST(Sample, SameSeedSameField) {
  GreenOperator gop(build_domain(DomainSpec(), 4));
  Rng a(99), b(99);
  const Field x = sample_field(gop, a);
  const Field y = sample_field(gop, b);
  for (VertexId v = 0; v < x.size(); ++v) EXPECT_EQ(x[v], y[v]);
}

TEST(Sample, SingleVertexVariance) {
  GreenOperator gop(build_domain(single_vertex(), 2));
  Rng rng(1);
  const std::size_t m = 1'000'000;
  double s2 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = sample_field(gop, rng)[0];
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double var = s2 / m;
  const double se = std::sqrt((s4 / m - var * var) / m);
  EXPECT_LE(std::abs(var - 0.25), 3.0 * se);
}

TEST(Sample, TwoVertexCovariance) {
  GreenOperator gop(build_domain(two_vertices(), 2));
  Rng rng(2);
  const std::size_t m = 1'000'000;
  double sxx = 0, syy = 0, sxy = 0, qxx = 0, qyy = 0, qxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Field f = sample_field(gop, rng);
    const double x = f[0], y = f[1];
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    qxx += x * x * x * x;
    qyy += y * y * y * y;
    qxy += x * x * y * y;
  }
  auto check = [&](double s, double q, double exact) {
    const double mean = s / m;
    const double se = std::sqrt((q / m - mean * mean) / m);
    EXPECT_LE(std::abs(mean - exact), 3.0 * se) << mean << " vs " << exact;
  };
  check(sxx, qxx, 4.0 / 15.0);
  check(syy, qyy, 4.0 / 15.0);
  check(sxy, qxy, 1.0 / 15.0);
}

TEST(Sample, VertexVariancesConvergeToGreenDiagonal) {
  GreenOperator gop(build_domain(DomainSpec(), 2));
  const auto n = gop.domain().interior_count();
  const std::size_t m = 20000;
  std::vector<double> s2(n, 0.0), s4(n, 0.0);
  Rng rng(3);
  for (std::size_t i = 0; i < m; ++i) {
    const Field f = sample_field(gop, rng);
    for (VertexId v = 0; v < n; ++v) {
      s2[v] += f[v] * f[v];
      s4[v] += f[v] * f[v] * f[v] * f[v];
    }
  }
  double z2 = 0.0;
  for (VertexId v = 0; v < n; ++v) {
    const double var = s2[v] / m;
    const double se = std::sqrt((s4[v] / m - var * var) / m);
    z2 += std::pow((var - gop.green(v, v)) / se, 2);
  }
  // Mean squared z-score over vertices is about 1 (positively correlated
  // vertices widen its spread, hence the generous band).
  EXPECT_LT(z2 / n, 4.0);
}

TEST(FieldType, RejectsNonFiniteAndWrongSize) {
  const auto d = build_domain(two_vertices(), 2);
  EXPECT_THROW(Field(d, {1.0, NAN}), std::invalid_argument);
  EXPECT_THROW(Field(d, {1.0}), std::invalid_argument);
  const Field f(d, {1.0, -2.0});
  EXPECT_EQ(f.negated()[1], 2.0);
  EXPECT_EQ(f.scaled(3.0)[0], 3.0);
}
