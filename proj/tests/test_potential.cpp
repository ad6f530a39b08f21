#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rayflow/potential.hpp"

using namespace rayflow;

TEST(GreenPotential, IdentityAtCZero) {
  EXPECT_NEAR(green_potential(0.0, 2.0), std::log(2.0), 1e-12);
  EXPECT_NEAR(green_potential(0.0, Cplx(3.0, 4.0)), std::log(5.0), 1e-12);
  EXPECT_EQ(green_potential(0.0, 0.5), 0.0);
}

TEST(GreenPotential, FunctionalEquation) {
  // G(f_c(z)) = 2 G(z) on escaping orbits
  const Cplx cs[] = {Cplx(-3.0, 0.0), Cplx(0.3, 0.8), Cplx(-2.0, 1.0)};
  const Cplx zs[] = {Cplx(2.5, 0.0), Cplx(0.4, 2.0), Cplx(-1.9, 1.4)};
  for (const Cplx& c : cs) {
    for (const Cplx& z : zs) {
      const double g = green_potential(c, z);
      if (g == 0.0) continue;
      const double gf = green_potential(c, z * z + c);
      EXPECT_LT(std::abs(gf - 2.0 * g) / gf, 1e-10);
    }
  }
}

TEST(Boettcher, IdentityAtCZero) {
  const Cplx z(3.0, 4.0);
  EXPECT_LT(std::abs(boettcher_value(0.0, z) - z), 1e-12);
}

TEST(Boettcher, TangentToIdentityAtInfinity) {
  const Cplx z(1e6, 0.0);
  const Cplx phi = boettcher_value(Cplx(-3.0, 0.0), z);
  EXPECT_LT(std::abs(phi / z - 1.0), 1e-6);
}

TEST(Boettcher, FunctionalEquation) {
  const Cplx c(-3.0, 0.0);
  const Cplx ws[] = {Cplx(3.0, 0.1), Cplx(2.0, 2.0), Cplx(-2.6, 0.4), Cplx(0.5, 3.0)};
  for (const Cplx& w : ws) {
    const Cplx lhs = boettcher_value(c, w * w + c);
    const Cplx rhs = boettcher_value(c, w);
    EXPECT_LT(std::abs(lhs - rhs * rhs) / std::abs(lhs), 1e-8);
  }
}

TEST(Boettcher, DomainErrors) {
  EXPECT_THROW(boettcher_value(0.0, 0.5), NotEscaping);
  // z escapes but sits below the critical-value potential for c = -3
  const Cplx c(-3.0, 0.0);
  const double gc = mandelbrot_potential(c);
  const Cplx z(0.05, 0.05);  // tiny potential, escapes eventually
  ASSERT_GT(green_potential(c, z), 0.0);
  ASSERT_LT(green_potential(c, z), gc);
  EXPECT_THROW(boettcher_value(c, z), OutsideDomain);
}

TEST(MandelbrotBoettcher, MatchesPotential) {
  const Cplx cs[] = {Cplx(-3.0, 0.0), Cplx(0.5, 0.7), Cplx(-2.0001, 0.0), Cplx(0.3, 1.2)};
  for (const Cplx& c : cs) {
    const Cplx phi = mandelbrot_boettcher(c);
    EXPECT_LT(std::abs(std::log(std::abs(phi)) - mandelbrot_potential(c)), 1e-10);
  }
  EXPECT_THROW(mandelbrot_boettcher(Cplx(0.0, 0.0)), NotEscaping);
}

TEST(MandelbrotBoettcher, RealNegativeAxisHasAngleHalf) {
  // the angle-1/2 parameter ray is the real interval (-inf, -2)
  for (double x : {-2.001, -2.1, -3.0, -5.0}) {
    const Cplx phi = mandelbrot_boettcher(Cplx(x, 0.0));
    EXPECT_NEAR(std::arg(phi), 3.14159265358979323846, 1e-12) << x;
  }
}
