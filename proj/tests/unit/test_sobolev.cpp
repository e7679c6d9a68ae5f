#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gffexc/grid_function.hpp"
#include "gffexc/replica.hpp"
#include "gffexc/sobolev.hpp"

using namespace gffexc;

namespace {

SobolevSpec unit_spec(double s) {
  SobolevSpec spec;
  spec.exponent = s;
  spec.square = {0.0, 0.0, 1.0, 1.0};
  return spec;
}

}  // namespace

TEST(Sobolev, ZeroField) {
  const auto d = build_domain(DomainSpec(Rectangle{0, 0, 1, 1}), 4);
  EXPECT_EQ(sobolev_norm(Field::zeros(d), unit_spec(1.0)), 0.0);
}

TEST(Sobolev, FirstEigenfunction) {
  const auto d = build_domain(DomainSpec(Rectangle{0, 0, 1, 1}), 7);
  const Field f(d, make_grid_function(*d, NamedFunction::eigen11));
  // |f|_{L2}^2 = 1/4 and the eigenvalue is 2 pi^2.
  const double expected = 0.25 / (2.0 * std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(expected, 0.012665, 1e-6);
  EXPECT_NEAR(sobolev_norm(f, unit_spec(1.0)), expected, 0.02 * expected);
}

TEST(Sobolev, QuadraticScaling) {
  GreenOperator gop(build_domain(DomainSpec(), 4));
  Rng rng(1);
  const Field f = gop.sample(rng);
  SobolevSpec spec;
  const double one = sobolev_norm(f, spec);
  const double two = sobolev_norm(f.scaled(2.0), spec);
  EXPECT_NEAR(two, 4.0 * one, 1e-12 * two);
}

TEST(Sobolev, TruncationAndExponentMonotone) {
  GreenOperator gop(build_domain(DomainSpec(), 4));
  Rng rng(2);
  const Field f = gop.sample(rng);
  SobolevSpec full;
  SobolevSpec low = full;
  low.max_frequency = 5;
  EXPECT_LE(sobolev_norm(f, low), sobolev_norm(f, full));
  SobolevSpec rough = full;
  rough.exponent = 0.5;
  // Eigenvalues exceed 1 on the side-2 square, so a larger exponent shrinks every weight.
  EXPECT_LT(sobolev_norm(f, full), sobolev_norm(f, rough));
}

TEST(Sobolev, SquareMustContainDomain) {
  const auto d = build_domain(DomainSpec(), 3);
  EXPECT_THROW(sobolev_norm(Field::zeros(d), unit_spec(1.0)), std::invalid_argument);
}
