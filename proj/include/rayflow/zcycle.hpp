#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "rayflow/julia_points.hpp"

namespace rayflow {

/// One block of the Z-cycle decomposition of an orbit: a V0-avoiding
/// prefix [0, N1), or a Z-cycle [N, N') opening with an orbit point in
/// V0 = D(0, nu) and containing no other V0 entry before its right end.
struct ZBlock {
  int start = 0;
  int end = -1;  // -1 encodes an unbounded block (truncated at the horizon)
  bool zcycle = false;
  double expansion = 0.0;  // |Df^{N'-N}(z_N)| for finite Z-cycles
};

struct ZCycleDecomposition {
  double nu = 0.0;
  int horizon = 0;
  bool truncated = false;  // last block runs past the horizon
  std::vector<ZBlock> blocks;
  std::vector<double> expansions;  // finite Z-cycle expansions, in order
};

/// Decomposes the orbit indices [0, horizon] by exact membership
/// |z_n| < nu. The orbit is taken as given (the realized pullback
/// intermediates keep it accurate at every index).
inline ZCycleDecomposition zcycle_decompose_orbit(const std::vector<Cplx>& orbit, double nu,
                                                  int horizon) {
  if (!(nu > 0.0) || horizon < 1) throw std::invalid_argument("need nu > 0 and horizon >= 1");
  if (static_cast<int>(orbit.size()) <= horizon)
    throw std::invalid_argument("orbit shorter than the horizon");
  ZCycleDecomposition out;
  out.nu = nu;
  out.horizon = horizon;

  std::vector<int> entries;
  for (int n = 0; n <= horizon; ++n)
    if (std::abs(orbit[n]) < nu) entries.push_back(n);

  auto block_expansion = [&](int a, int b) {
    double s = 0.0;
    for (int n = a; n < b; ++n) s += std::log(2.0 * std::abs(orbit[n]));
    return std::exp(s);
  };

  if (entries.empty()) {
    out.blocks.push_back({0, -1, false, 0.0});
    out.truncated = true;
    return out;
  }
  if (entries.front() > 0) out.blocks.push_back({0, entries.front(), false, 0.0});
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    const int a = entries[i], b = entries[i + 1];
    const double exp_ab = block_expansion(a, b);
    out.blocks.push_back({a, b, true, exp_ab});
    out.expansions.push_back(exp_ab);
  }
  out.blocks.push_back({entries.back(), -1, true, 0.0});
  out.truncated = true;  // the final block's right end lies past the horizon
  return out;
}

/// Decomposition of a realized Julia point's orbit. Uses the pullback
/// intermediates when they cover the horizon; falls back to forward
/// iteration (which loses accuracy at a repelling rate) otherwise.
inline ZCycleDecomposition zcycle_decompose(Cplx c, const JuliaPoint& z, double nu, int horizon) {
  if (static_cast<int>(z.orbit.size()) > horizon)
    return zcycle_decompose_orbit(z.orbit, nu, horizon);
  std::vector<Cplx> orbit;
  orbit.reserve(horizon + 1);
  Cplx w = z.position;
  for (int n = 0; n <= horizon; ++n) {
    orbit.push_back(w);
    w = w * w + c;
  }
  return zcycle_decompose_orbit(orbit, nu, horizon);
}

}  // namespace rayflow
