#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rayflow/misiurewicz.hpp"
#include "rayflow/motion.hpp"
#include "rayflow/potential.hpp"
#include "rayflow/ray.hpp"

using namespace rayflow;

TEST(DynamicRay, AngleZeroAtCZeroIsPositiveReal) {
  const RayPolyline ray = trace_dynamic_ray(0.0, ExactAngle(0, 1), 1e-4);
  ASSERT_FALSE(ray.stalled);
  ASSERT_GT(ray.samples.size(), 50u);
  for (const RaySample& s : ray.samples) {
    EXPECT_NEAR(s.point.imag(), 0.0, 1e-12);
    EXPECT_NEAR(s.point.real(), std::exp(s.potential), 1e-9 * std::exp(s.potential));
  }
}

TEST(DynamicRay, AngleHalfAtCZeroIsNegativeReal) {
  const RayPolyline ray = trace_dynamic_ray(0.0, ExactAngle(1, 2), 1e-4);
  ASSERT_FALSE(ray.stalled);
  for (const RaySample& s : ray.samples) {
    EXPECT_NEAR(s.point.imag(), 0.0, 1e-12);
    EXPECT_LT(s.point.real(), 0.0);
  }
}

TEST(DynamicRay, RealSymmetricCaseWithGreenCrossCheck) {
  const Cplx c(-3.0, 0.0);
  const RayPolyline ray = trace_dynamic_ray(c, ExactAngle(1, 2), 1e-5);
  ASSERT_FALSE(ray.stalled);
  double prev = 1e300;
  for (const RaySample& s : ray.samples) {
    EXPECT_NEAR(s.point.imag(), 0.0, 1e-10);
    EXPECT_LT(s.point.real(), 0.0);
    EXPECT_LT(s.potential, prev);  // potentials strictly decreasing
    prev = s.potential;
    const double g = green_potential(c, s.point);
    EXPECT_LT(std::abs(g - s.potential) / s.potential, 1e-8);
  }
}

TEST(DynamicRay, PotentialsMatchGreenOffAxis) {
  const Cplx c(0.3, 0.8);  // outside M
  ASSERT_GT(mandelbrot_potential(c), 0.0);
  const RayPolyline ray = trace_dynamic_ray(c, ExactAngle(1, 3), 1e-2);
  ASSERT_FALSE(ray.stalled);
  for (const RaySample& s : ray.samples) {
    const double g = green_potential(c, s.point);
    EXPECT_LT(std::abs(g - s.potential) / s.potential, 1e-8);
  }
}

TEST(DynamicRay, ConjugationSymmetry) {
  const Cplx c(-3.0, 0.0);  // real parameter: conjugating the angle mirrors the ray
  const RayPolyline up = trace_dynamic_ray(c, ExactAngle(1, 6), 1e-4);
  const RayPolyline dn = trace_dynamic_ray(c, ExactAngle(5, 6), 1e-4);
  ASSERT_EQ(up.samples.size(), dn.samples.size());
  for (std::size_t i = 0; i < up.samples.size(); ++i) {
    EXPECT_LT(std::abs(dn.samples[i].point - std::conj(up.samples[i].point)), 1e-10);
  }
}

TEST(DynamicRay, LandsOnFixedPoints) {
  EXPECT_LT(std::abs(land_dynamic_ray(0.0, ExactAngle(0, 1)).point - Cplx(1.0, 0.0)), 1e-9);
  EXPECT_LT(std::abs(land_dynamic_ray(0.0, ExactAngle(1, 2)).point - Cplx(-1.0, 0.0)), 1e-9);
}

TEST(DynamicRay, CriticalPointRaysAtMinusTwo) {
  // at c = -2 the rays of angles 1/4 and 3/4 land at the critical point
  EXPECT_LT(std::abs(land_dynamic_ray(Cplx(-2.0, 0.0), ExactAngle(1, 4)).point), 1e-6);
  EXPECT_LT(std::abs(land_dynamic_ray(Cplx(-2.0, 0.0), ExactAngle(3, 4)).point), 1e-6);
}

TEST(ParameterRay, AngleHalfIsRealBelowMinusTwo) {
  const RayPolyline ray = trace_parameter_ray(ExactAngle(1, 2), 1e-5);
  ASSERT_FALSE(ray.stalled);
  for (const RaySample& s : ray.samples) {
    EXPECT_NEAR(s.point.imag(), 0.0, 1e-12);
    EXPECT_LT(s.point.real(), -2.0);
  }
}

TEST(ParameterRay, SamplesSatisfyBoettcherTarget) {
  // committed samples re-verified independently of the Newton that made them
  for (const auto& theta : {ExactAngle(1, 2), ExactAngle(1, 6), ExactAngle(1, 4),
                            ExactAngle(9, 56), ExactAngle(5, 12)}) {
    const RayPolyline ray = trace_parameter_ray(theta, 1e-4);
    ASSERT_FALSE(ray.stalled) << theta.str();
    for (const RaySample& s : ray.samples) {
      const Cplx phi = mandelbrot_boettcher(s.point);
      const Cplx target = std::polar(std::exp(s.potential), kTwoPi * theta.value());
      EXPECT_LT(std::abs(phi - target) / std::abs(target), 1e-8)
          << theta.str() << " at g = " << s.potential;
    }
  }
}

TEST(ParameterRay, ConjugationSymmetry) {
  const RayPolyline up = trace_parameter_ray(ExactAngle(1, 4), 1e-4);
  const RayPolyline dn = trace_parameter_ray(ExactAngle(3, 4), 1e-4);
  ASSERT_EQ(up.samples.size(), dn.samples.size());
  bool upper_half = true;
  for (std::size_t i = 0; i < up.samples.size(); ++i) {
    EXPECT_LT(std::abs(dn.samples[i].point - std::conj(up.samples[i].point)), 1e-10);
    upper_half = upper_half && up.samples[i].point.imag() > 0.0;
  }
  EXPECT_TRUE(upper_half);
}

TEST(ParameterLandingSuite, AngleHalfLandsAtMinusTwo) {
  const ParameterLanding land = land_parameter_ray(ExactAngle(1, 2), 1, 2.0, 1e-9);
  EXPECT_LT(std::abs(land.c_hat - Cplx(-2.0, 0.0)), 1e-6);
  ASSERT_GT(land.ratios.size(), 4u);
  // Lemma V decay: multiplier 4 at p = 1 gives gap ratios -> 1/4
  for (std::size_t i = land.ratios.size() - 3; i < land.ratios.size(); ++i) {
    EXPECT_LE(land.ratios[i], 0.5);
    EXPECT_NEAR(land.ratios[i], 0.25, 0.1);
  }
}

TEST(ParameterLandingSuite, AngleSixthLandsAtI) {
  const ParameterLanding land = land_parameter_ray(ExactAngle(1, 6), 2, 2.0, 1e-9);
  EXPECT_LT(std::abs(land.c_hat - Cplx(0.0, 1.0)), 1e-6);
  // ratios approach 1/|multiplier| = 1/(4 sqrt 2)
  ASSERT_GT(land.ratios.size(), 3u);
  EXPECT_NEAR(land.ratios.back(), 1.0 / (4.0 * std::sqrt(2.0)), 0.08);
}

TEST(ParameterLandingSuite, NineFiftySixths) {
  const ParameterLanding land = land_parameter_ray(ExactAngle(9, 56), 3, 2.0, 1e-9);
  // landing solves f^{l+3}(0) = f^l(0) with l = preperiod 3 + 1
  const Cplx polished = solve_misiurewicz(4, 3, land.c_hat, 1e-13);
  EXPECT_LT(std::abs(polished - land.c_hat), 1e-6);
  const MisiurewiczData d = landing_data(polished, 1e-10);
  EXPECT_EQ(d.l, 4);
  EXPECT_EQ(d.period, 3);
}

TEST(ParameterLandingSuite, ParabolicAngleReportsNoCauchy) {
  // odd-denominator angles land on parabolic parameters; gaps decay too
  // slowly for the Cauchy criterion and the honest answer is NoCauchy
  EXPECT_THROW(land_parameter_ray(ExactAngle(0, 1), 1, 2.0, 1e-9), NoCauchy);
}

TEST(RayCursor, MemoizedDescentIsConsistent) {
  RayCursor cur(ExactAngle(1, 6), true, Cplx(0, 0));
  const Cplx a = cur.at(0.25);
  const Cplx b = cur.at(0.03125);
  const Cplx a2 = cur.at(0.25);
  EXPECT_EQ(a, a2);  // memo hit
  EXPECT_LT(std::abs(mandelbrot_boettcher(b) - std::polar(std::exp(0.03125), kTwoPi / 6.0)),
            1e-9);
}

TEST(RayPointAtEps, HitsRequestedDistance) {
  const MisiurewiczRay ray = analyze_ray(ExactAngle(1, 2));
  RayCursor cur(ExactAngle(1, 2), true, Cplx(0, 0));
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto [g, c] = ray_point_at_eps(cur, ray.c_hat, eps);
    EXPECT_LT(std::abs(std::abs(c - ray.c_hat) / eps - 1.0), 5e-3) << eps;
    EXPECT_GT(g, 0.0);
  }
}

TEST(AnalyzeRay, ResolvesKnownAngles) {
  const MisiurewiczRay half = analyze_ray(ExactAngle(1, 2));
  EXPECT_LT(std::abs(half.c_hat - Cplx(-2.0, 0.0)), 1e-12);
  EXPECT_EQ(half.data.l, 2);
  EXPECT_EQ(half.data.period, 1);
  EXPECT_EQ(half.e, parse_itinerary("0(1)"));

  const MisiurewiczRay sixth = analyze_ray(ExactAngle(1, 6));
  EXPECT_LT(std::abs(sixth.c_hat - Cplx(0.0, 1.0)), 1e-12);
  EXPECT_EQ(sixth.data.l, 2);
  EXPECT_EQ(sixth.data.period, 2);
  EXPECT_EQ(sixth.data.p, 2);

  EXPECT_THROW(analyze_ray(ExactAngle(1, 3)), std::invalid_argument);
  EXPECT_THROW(analyze_ray(ExactAngle(0, 1)), std::invalid_argument);
}
