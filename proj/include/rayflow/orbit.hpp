#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace rayflow {

using Cplx = std::complex<double>;

/// Orbits truncate once |z| passes this, keeping doubles finite.
constexpr double kOverflowGuard = 1e150;

/// Forward orbit of f_c(z) = z^2 + c with the two derivative recursions
///   Df^{n+1} = 2 z_n Df^n          (space, Df^0 = 1)
///   dz_{n+1}/dc = 2 z_n dz_n/dc + 1 (parameter, dz_0/dc = 0)
struct OrbitData {
  std::vector<Cplx> points;
  std::vector<Cplx> d_space;
  std::vector<Cplx> d_param;               // filled only when requested
  std::optional<int> truncated_at;         // index where the overflow guard hit
};

inline OrbitData iterate_with_derivatives(Cplx c, Cplx z0, int n, bool want_param = false) {
  OrbitData o;
  o.points.reserve(n + 1);
  o.d_space.reserve(n + 1);
  if (want_param) o.d_param.reserve(n + 1);
  Cplx z = z0, ds = 1.0, dp = 0.0;
  for (int k = 0; k <= n; ++k) {
    o.points.push_back(z);
    o.d_space.push_back(ds);
    if (want_param) o.d_param.push_back(dp);
    if (std::abs(z) > kOverflowGuard) {
      o.truncated_at = k;
      break;
    }
    if (k == n) break;
    ds *= 2.0 * z;
    if (want_param) dp = 2.0 * z * dp + 1.0;
    z = z * z + c;
  }
  return o;
}

/// Smallest n <= max_iter with |f_c^n(z)| > radius, or nullopt when the
/// orbit stays inside. Meaningful for radius >= 2 + |c|.
inline std::optional<int> escape_time(Cplx c, Cplx z, double radius, int max_iter) {
  for (int n = 0; n <= max_iter; ++n) {
    if (std::abs(z) > radius) return n;
    z = z * z + c;
  }
  return std::nullopt;
}

}  // namespace rayflow
