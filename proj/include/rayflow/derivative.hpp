#pragma once

#include <cmath>
#include <stdexcept>

#include "rayflow/julia_points.hpp"
#include "rayflow/orbit.hpp"

namespace rayflow {

struct NoContraction : std::runtime_error {
  explicit NoContraction(const std::string& what) : std::runtime_error(what) {}
};

/// Derivative of the holomorphic motion at a Julia point of a hyperbolic
/// parameter: dz/dc = -sum_{n>=1} 1/Df_c^n(z). The partial sum stops when
/// the measured geometric tail (recent term ratio, safety factor 2) drops
/// below tol; the certified tail bound is returned with the value.
inline DerivEstimate derivative_series(Cplx c, Cplx z, double tol = 1e-12, int budget = 5000) {
  Cplx sum = 0.0;
  Cplx D = 1.0;
  double t_prev[3] = {0.0, 0.0, 0.0};  // recent term magnitudes
  for (int n = 1; n <= budget; ++n) {
    D *= 2.0 * z;
    z = z * z + c;
    const Cplx term = 1.0 / D;
    sum += term;
    const double t = std::abs(term);
    double r = 0.0;
    if (t_prev[0] > 0.0) r = t / t_prev[0];
    if (t_prev[1] > 0.0) r = std::max(r, t_prev[0] / t_prev[1]);
    if (t_prev[2] > 0.0) r = std::max(r, t_prev[1] / t_prev[2]);
    if (n >= 4 && r > 0.0 && r < 0.95) {
      const double tail = 2.0 * t * r / (1.0 - r);
      if (tail < tol) return {-sum, tail, n};
    }
    t_prev[2] = t_prev[1];
    t_prev[1] = t_prev[0];
    t_prev[0] = t;
  }
  throw NoContraction("term ratios failed to contract within budget");
}

inline DerivEstimate derivative_series(const JuliaPoint& z, double tol = 1e-12,
                                       int budget = 5000) {
  return derivative_series(z.c, z.position, tol, budget);
}

}  // namespace rayflow
