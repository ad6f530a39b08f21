#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rayflow/orbit.hpp"

namespace rayflow {

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct NotMisiurewicz : std::runtime_error {
  explicit NotMisiurewicz(const std::string& what) : std::runtime_error(what) {}
};

struct InsideM : std::runtime_error {
  InsideM() : std::runtime_error("critical orbit failed to escape within budget") {}
};

/// The landing structure of a Misiurewicz parameter: f^l(0) sits on the
/// repelling cycle, l minimal; p is the smallest multiple of the period
/// whose cycle derivative clears the expansion floor (default 3; any
/// constant above one works and the floor is exposed for that reason).
struct MisiurewiczData {
  Cplx c_hat;
  int l = 0;
  std::vector<Cplx> cycle;
  int period = 0;
  Cplx multiplier;
  int p = 0;
};

namespace detail {

// Polishes a periodic point by Newton on f^q(x) - x; kills the drift that
// the repelling cycle amplifies into the raw orbit values.
inline Cplx refine_periodic(Cplx c, Cplx x, int q) {
  for (int it = 0; it < 60; ++it) {
    Cplx z = x, d = 1.0;
    for (int k = 0; k < q; ++k) {
      d *= 2.0 * z;
      z = z * z + c;
    }
    const Cplx g = z - x;
    const Cplx dg = d - 1.0;
    if (std::abs(dg) == 0.0) break;
    const Cplx step = g / dg;
    x -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace detail

/// Detects the minimal (l, period) of a (numerically) Misiurewicz c_hat by
/// nearest-return scanning of the critical orbit, refines the cycle, and
/// derives p. Throws NotMisiurewicz when no repelling preperiodic
/// structure shows up within max_l at tolerance tol.
inline MisiurewiczData landing_data(Cplx c_hat, double tol = 1e-12, int max_l = 64,
                                    double expansion_floor = 3.0) {
  const int horizon = 2 * max_l;
  OrbitData orbit = iterate_with_derivatives(c_hat, 0.0, horizon);
  const int avail = static_cast<int>(orbit.points.size()) - 1;

  int l = -1, q = -1;
  for (int li = 0; li <= max_l && l < 0; ++li) {
    for (int qi = 1; qi <= max_l; ++qi) {
      if (li + qi > avail) break;
      if (std::abs(orbit.points[li + qi] - orbit.points[li]) < tol) {
        l = li;
        q = qi;
        break;
      }
    }
  }
  if (l < 0) throw NotMisiurewicz("no near-return within max_l at the given tolerance");
  if (l == 0) throw NotMisiurewicz("critical point is periodic, not preperiodic");

  MisiurewiczData out;
  out.c_hat = c_hat;
  out.l = l;
  out.period = q;
  out.cycle.reserve(q);
  Cplx x = detail::refine_periodic(c_hat, orbit.points[l], q);
  Cplx mult = 1.0;
  for (int k = 0; k < q; ++k) {
    out.cycle.push_back(x);
    mult *= 2.0 * x;
    x = x * x + c_hat;
  }
  out.multiplier = mult;
  const double m = std::abs(mult);
  if (m <= 1.0) throw NotMisiurewicz("landing cycle is not repelling");
  if (std::abs(out.cycle.front() - orbit.points[l]) > 1e3 * tol + 1e-9)
    throw NotMisiurewicz("cycle refinement drifted from the orbit");

  int k = static_cast<int>(std::ceil(std::log(expansion_floor) / std::log(m)));
  if (k < 1) k = 1;
  out.p = k * q;
  return out;
}

/// Newton root of F(c) = f_c^{l+p}(0) - f_c^l(0) from the given seed,
/// using the parameter-derivative recursion for F'. The step is damped by
/// halving (up to 20 times) whenever |F| fails to decrease; the result is
/// post-validated by landing_data so that roots with a different true
/// preperiod or a non-repelling cycle are rejected.
inline Cplx solve_misiurewicz(int l, int p, Cplx seed, double tol = 1e-12) {
  if (l < 1 || p < 1) throw std::invalid_argument("solve_misiurewicz: l, p must be >= 1");
  Cplx c = seed;
  auto eval = [&](Cplx cc, Cplx* deriv) {
    OrbitData o = iterate_with_derivatives(cc, 0.0, l + p, true);
    if (o.truncated_at && *o.truncated_at <= l + p)
      return Cplx(kOverflowGuard, 0.0);
    if (deriv) *deriv = o.d_param[l + p] - o.d_param[l];
    return o.points[l + p] - o.points[l];
  };

  Cplx dF;
  Cplx F = eval(c, &dF);
  bool ok = false;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(F) < tol) {
      ok = true;
      break;
    }
    if (std::abs(dF) == 0.0) break;
    Cplx step = F / dF;
    Cplx cand;
    Cplx Fc;
    bool improved = false;
    for (int h = 0; h <= 20; ++h) {
      cand = c - step;
      Fc = eval(cand, nullptr);
      if (std::abs(Fc) < std::abs(F)) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
    c = cand;
    F = eval(c, &dF);
  }
  if (!ok && std::abs(F) >= tol)
    throw NoConvergence("misiurewicz Newton did not reach tolerance from this seed");

  MisiurewiczData data = landing_data(c, 10 * tol);
  if (data.l != l || p % data.period != 0)
    throw NotMisiurewicz("root has preperiodic structure (" + std::to_string(data.l) + "," +
                         std::to_string(data.period) + "), requested (" + std::to_string(l) +
                         "," + std::to_string(p) + ")");
  return c;
}

/// Two-sided bracket of dist(c, boundary of M) for c outside M.
struct DistBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Exterior distance estimator from the escaped critical orbit: Koebe 1/4
/// lower bound and Harnack upper bound on the parameter-plane Green
/// function, clamped by the global geometry of M (M is inside the closed
/// 2-disk, and -2 and 1/4 are boundary points).
inline DistBracket mandelbrot_distance_estimate(Cplx c, int budget = 20000) {
  Cplx z = c, dz = 1.0;  // critical orbit from b_1 = c; dz = db_n/dc
  int n = 1;
  while (std::abs(z) < 1e100) {
    if (n > budget) throw InsideM();
    dz = 2.0 * z * dz + 1.0;
    z = z * z + c;
    ++n;
  }
  const double scale = std::ldexp(1.0, -(n - 1));  // 2^{-(n-1)}, G(b_n) = 2^{n-1} G_M(c)
  const double G = scale * std::log(std::abs(z));
  const double gradG = scale * std::abs(dz) / std::abs(z);

  double lower = (1.0 - std::exp(-G)) / (4.0 * gradG);
  double upper = 2.0 * G / gradG;
  lower = std::max(lower, std::abs(c) - 2.0);
  upper = std::min({upper, std::abs(c + 2.0), std::abs(c - 0.25)});
  lower = std::min(lower, upper);
  return {lower, upper};
}

}  // namespace rayflow
