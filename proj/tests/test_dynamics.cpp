#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "rayflow/misiurewicz.hpp"
#include "rayflow/orbit.hpp"

using namespace rayflow;

TEST(Orbit, HandIteration) {
  // f_{-2}(2) = 2, Df = 2z = 4
  const OrbitData o = iterate_with_derivatives(-2.0, 2.0, 3);
  ASSERT_EQ(o.points.size(), 4u);
  for (const Cplx& z : o.points) EXPECT_EQ(z, Cplx(2.0));
  EXPECT_EQ(o.d_space[0], Cplx(1.0));
  EXPECT_EQ(o.d_space[1], Cplx(4.0));
  EXPECT_EQ(o.d_space[2], Cplx(16.0));
  EXPECT_EQ(o.d_space[3], Cplx(64.0));
}

TEST(Orbit, ParamDerivativeAtZero) {
  const OrbitData o = iterate_with_derivatives(0.0, 0.0, 2, true);
  ASSERT_EQ(o.d_param.size(), 3u);
  EXPECT_EQ(o.d_param[0], Cplx(0.0));
  EXPECT_EQ(o.d_param[1], Cplx(1.0));
  EXPECT_EQ(o.d_param[2], Cplx(1.0));
}

TEST(Orbit, IdentityCase) {
  const OrbitData o = iterate_with_derivatives(Cplx(0.3, -0.1), Cplx(1.5, 0.25), 0);
  ASSERT_EQ(o.points.size(), 1u);
  EXPECT_EQ(o.points[0], Cplx(1.5, 0.25));
  EXPECT_EQ(o.d_space[0], Cplx(1.0));
}

TEST(Orbit, OverflowGuardTruncates) {
  const OrbitData o = iterate_with_derivatives(0.0, 1e100, 10);
  ASSERT_TRUE(o.truncated_at.has_value());
  EXPECT_LE(*o.truncated_at, 2);
  EXPECT_EQ(o.points.size(), static_cast<std::size_t>(*o.truncated_at) + 1);
}

TEST(Orbit, ChainRule) {
  // Df^{m+n}(z) = Df^n(f^m z) Df^m(z) to relative error < 1e-12
  std::mt19937_64 rng(11);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1p-53);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const Cplx c(uniform(-2.2, 0.5), uniform(-1.2, 1.2));
    const Cplx z(uniform(-1.5, 1.5), uniform(-1.5, 1.5));
    const int m = 1 + static_cast<int>(rng() % 10);
    const int n = 1 + static_cast<int>(rng() % 10);
    const OrbitData full = iterate_with_derivatives(c, z, m + n);
    if (full.truncated_at) continue;
    const OrbitData part = iterate_with_derivatives(c, full.points[m], n);
    const Cplx lhs = full.d_space[m + n];
    const Cplx rhs = part.d_space[n] * full.d_space[m];
    if (std::abs(lhs) == 0.0) continue;
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-12);
  }
}

TEST(Orbit, ParamDerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1p-53);
  };
  const double h = 1e-7;
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 50; ++trial) {
    const Cplx c(uniform(-1.5, 0.3), uniform(-0.8, 0.8));
    const Cplx z(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    const int n = 5 + static_cast<int>(rng() % 26);
    const OrbitData o = iterate_with_derivatives(c, z, n, true);
    bool bounded = !o.truncated_at.has_value();
    for (const Cplx& p : o.points) bounded = bounded && std::abs(p) <= 10.0;
    if (!bounded || std::abs(o.d_param[n]) < 1e-3) continue;
    const OrbitData plus = iterate_with_derivatives(c + h, z, n);
    const OrbitData minus = iterate_with_derivatives(c - h, z, n);
    const Cplx fd = (plus.points[n] - minus.points[n]) / (2.0 * h);
    EXPECT_LT(std::abs(o.d_param[n] - fd) / std::abs(o.d_param[n]), 1e-5);
    ++tested;
  }
  EXPECT_GE(tested, 20);
}

TEST(EscapeTime, SpecExamples) {
  EXPECT_EQ(escape_time(0.0, 2.0, 100.0, 50), std::optional<int>(3));
  EXPECT_EQ(escape_time(0.0, 0.5, 100.0, 50), std::nullopt);
  const auto n = escape_time(Cplx(-2.001, 0.0), 0.0, 100.0, 10000);
  ASSERT_TRUE(n.has_value());
  EXPECT_GT(*n, 0);
}

TEST(SolveMisiurewicz, RealRoot) {
  const Cplx root = solve_misiurewicz(2, 1, Cplx(-1.9, 0.0));
  EXPECT_NEAR(root.real(), -2.0, 1e-11);
  EXPECT_NEAR(root.imag(), 0.0, 1e-11);
}

TEST(SolveMisiurewicz, ImaginaryRoot) {
  const Cplx root = solve_misiurewicz(2, 2, Cplx(0.1, 1.1));
  EXPECT_NEAR(root.real(), 0.0, 1e-11);
  EXPECT_NEAR(root.imag(), 1.0, 1e-11);
}

TEST(SolveMisiurewicz, RejectsSuperattracting) {
  EXPECT_THROW(solve_misiurewicz(1, 1, Cplx(0.1, 0.0)), NotMisiurewicz);
}

TEST(SolveMisiurewicz, ConjugateSeedGivesConjugateRoot) {
  const Cplx a = solve_misiurewicz(2, 2, Cplx(0.1, 1.1));
  const Cplx b = solve_misiurewicz(2, 2, Cplx(0.1, -1.1));
  EXPECT_LT(std::abs(b - std::conj(a)), 1e-13);
}

TEST(SolveMisiurewicz, RevalidatedByLandingData) {
  // real parameter with f^3(0) fixed: root of c^3 + 2c^2 + 2c + 2
  const Cplx root = solve_misiurewicz(3, 1, Cplx(-1.6, 0.0));
  EXPECT_NEAR(root.real(), -1.5436890126920764, 1e-10);
  const MisiurewiczData d = landing_data(root, 1e-10);
  EXPECT_EQ(d.l, 3);
  EXPECT_EQ(d.period, 1);
  EXPECT_GT(std::abs(d.multiplier), 1.0);
}

TEST(LandingData, Basilica) {
  const MisiurewiczData d = landing_data(Cplx(-2.0, 0.0));
  EXPECT_EQ(d.l, 2);
  EXPECT_EQ(d.period, 1);
  ASSERT_EQ(d.cycle.size(), 1u);
  EXPECT_NEAR(d.cycle[0].real(), 2.0, 1e-12);
  EXPECT_NEAR(std::abs(d.multiplier), 4.0, 1e-12);
  EXPECT_EQ(d.p, 1);
}

TEST(LandingData, AtI) {
  const MisiurewiczData d = landing_data(Cplx(0.0, 1.0));
  EXPECT_EQ(d.l, 2);
  EXPECT_EQ(d.period, 2);
  ASSERT_EQ(d.cycle.size(), 2u);
  // cycle {i-1, -i}, multiplier 2(i-1) * 2(-i) = 4 + 4i
  EXPECT_LT(std::abs(d.cycle[0] - Cplx(-1.0, 1.0)), 1e-12);
  EXPECT_LT(std::abs(d.cycle[1] - Cplx(0.0, -1.0)), 1e-12);
  EXPECT_LT(std::abs(d.multiplier - Cplx(4.0, 4.0)), 1e-11);
  EXPECT_NEAR(std::abs(d.multiplier), 4.0 * std::sqrt(2.0), 1e-11);
  EXPECT_EQ(d.p, 2);
}

TEST(LandingData, ParabolicRejected) {
  EXPECT_THROW(landing_data(Cplx(0.25, 0.0)), NotMisiurewicz);
}

TEST(LandingData, ExpansionFloorIsAParameter) {
  // |multiplier| = 4 at c = -2: floor 5 forces p = 2 periods
  const MisiurewiczData d = landing_data(Cplx(-2.0, 0.0), 1e-12, 64, 5.0);
  EXPECT_EQ(d.p, 2);
}

TEST(DistanceEstimate, BracketsKnownDistances) {
  // dist(-3, dM) = 1 exactly (M inside the closed 2-disk, -2 on the boundary)
  const DistBracket a = mandelbrot_distance_estimate(Cplx(-3.0, 0.0));
  EXPECT_LE(a.lower, 1.0 + 1e-12);
  EXPECT_GE(a.upper, 1.0 - 1e-12);
  EXPECT_LE(a.upper / a.lower, 4.0);

  const DistBracket b = mandelbrot_distance_estimate(Cplx(10.0, 0.0));
  EXPECT_LE(b.lower, 8.0 + 1e-12);
  EXPECT_GE(b.upper, 8.0);
  EXPECT_LE(b.upper / b.lower, 4.0);
}

TEST(DistanceEstimate, InsideMThrows) {
  EXPECT_THROW(mandelbrot_distance_estimate(Cplx(0.0, 0.0)), InsideM);
  EXPECT_THROW(mandelbrot_distance_estimate(Cplx(-1.0, 0.0)), InsideM);
}

TEST(DistanceEstimate, LowerBoundIsALowerBound) {
  // points at a known distance from the real slice [-2, 0.25]
  for (double x : {-2.5, -2.1, -4.0, 1.0, 3.0}) {
    const DistBracket d = mandelbrot_distance_estimate(Cplx(x, 0.0));
    const double true_dist = x < 0 ? -2.0 - x : x - 0.25;
    EXPECT_LE(d.lower, true_dist * (1 + 1e-12)) << x;
    EXPECT_GE(d.upper, true_dist * (1 - 1e-12)) << x;
  }
}
