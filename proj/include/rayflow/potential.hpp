#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rayflow/orbit.hpp"

namespace rayflow {

struct NotEscaping : std::runtime_error {
  NotEscaping() : std::runtime_error("orbit does not escape within budget") {}
};

struct OutsideDomain : std::runtime_error {
  OutsideDomain() : std::runtime_error("z is outside the domain of the Boettcher coordinate") {}
};

/// Green potential G(z) = lim 2^{-n} log|f_c^n(z)|. The orbit is pushed
/// far past the first escape so the remaining product corrections sit
/// below double precision. Non-escaping orbits get potential 0.
inline double green_potential(Cplx c, Cplx z, int budget = 2000) {
  double scale = 1.0;
  for (int n = 0; n <= budget; ++n) {
    const double az = std::abs(z);
    if (az > 1e100) return scale * std::log(az);
    z = z * z + c;
    scale *= 0.5;
  }
  return 0.0;
}

/// Potential of the parameter plane: G_M(c) = G_c(c).
inline double mandelbrot_potential(Cplx c, int budget = 2000) {
  return green_potential(c, c, budget);
}

namespace detail {

// log Phi_c(z) by the telescoping half-log product
//   Phi(z) = z * prod_n (1 + c/z_n^2)^{1/2^{n+1}},
// with principal branches. Requires an escaping z.
inline Cplx log_boettcher_product(Cplx c, Cplx z, int budget = 2000) {
  Cplx acc = std::log(z);
  double w = 0.5;
  for (int n = 0; n <= budget; ++n) {
    const Cplx z2 = z * z;
    const double az2 = std::norm(z);
    if (az2 > 1e160) return acc;  // remaining factors are 1 to double precision
    const Cplx factor = 1.0 + c / z2;
    acc += w * std::log(factor);
    z = z2 + c;
    w *= 0.5;
    if (std::abs(c) < 1e-17 * az2) return acc;
  }
  throw NotEscaping();
}

}  // namespace detail

/// Boettcher coordinate Phi_c(z), defined on the escaping region above
/// the critical-value potential (the paper's minimal r_c domain).
inline Cplx boettcher_value(Cplx c, Cplx z, int budget = 2000) {
  const double gz = green_potential(c, z, budget);
  if (gz == 0.0) throw NotEscaping();
  const double gc = mandelbrot_potential(c, budget);
  if (gz <= gc) throw OutsideDomain();
  return std::exp(detail::log_boettcher_product(c, z, budget));
}

/// Phi_M(c) = Phi_c(c), the Douady-Hubbard uniformization of the
/// exterior of M, evaluated along the critical-value orbit.
inline Cplx mandelbrot_boettcher(Cplx c, int budget = 2000) {
  if (mandelbrot_potential(c, budget) == 0.0) throw NotEscaping();
  return std::exp(detail::log_boettcher_product(c, c, budget));
}

}  // namespace rayflow
