#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rayflow/angle.hpp"
#include "rayflow/misiurewicz.hpp"
#include "rayflow/orbit.hpp"
#include "rayflow/potential.hpp"

namespace rayflow {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct NewtonStall : std::runtime_error {
  explicit NewtonStall(const std::string& what) : std::runtime_error(what) {}
};

struct NoCauchy : std::runtime_error {
  explicit NoCauchy(const std::string& what) : std::runtime_error(what) {}
};

struct RaySample {
  double potential;
  Cplx point;
};

struct RayLanding {
  Cplx point;
  double est_error;
};

struct RayPolyline {
  ExactAngle angle;
  bool parameter = false;
  Cplx c;  // dynamical-plane parameter; unused for parameter rays
  std::vector<RaySample> samples;
  std::optional<RayLanding> landing;
  bool stalled = false;
};

namespace detail {

struct NewtonTarget {
  int depth;
  Cplx value;  // exp(2^depth (g + 2 pi i t)), angle doubled exactly
};

// Minimal iterate depth whose target modulus clears R0^2, so that the
// Boettcher coordinate is the identity to double precision out there.
inline NewtonTarget ray_target(double g, ExactAngle t, double R0) {
  const double need = 2.0 * std::log(R0);
  int n = 0;
  double gn = g;
  ExactAngle tn = t;
  while (gn < need && n < 200) {
    gn *= 2.0;
    tn = tn.doubled();
    ++n;
  }
  return {n, std::polar(std::exp(gn), kTwoPi * tn.value())};
}

// Damped Newton shared by both planes. Evaluates the depth-fold orbit of
// the unknown (z for dynamic rays, the critical value c for parameter
// rays) and its derivative; steps are halved up to 20 times whenever the
// residual fails to decrease, and the solve stalls after 80 iterations.
template <typename Eval>
inline std::optional<Cplx> damped_newton(Cplx seed, const NewtonTarget& tgt, Eval eval) {
  const double tol = 1e-13 * std::abs(tgt.value);
  Cplx z = seed, dF;
  Cplx F = eval(z, &dF) - tgt.value;
  for (int it = 0; it < 80; ++it) {
    if (std::abs(F) <= tol) return z;
    if (!(std::abs(dF) > 0.0)) return std::nullopt;
    Cplx step = F / dF;
    Cplx cand;
    bool improved = false;
    for (int h = 0; h <= 20; ++h) {
      cand = z - step;
      const Cplx Fc = eval(cand, nullptr) - tgt.value;
      if (std::abs(Fc) < std::abs(F)) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) return std::nullopt;
    z = cand;
    F = eval(z, &dF) - tgt.value;
  }
  return std::abs(F) <= 10 * tol ? std::optional<Cplx>(z) : std::nullopt;
}

inline Cplx eval_dynamic(Cplx c, Cplx z, int depth, Cplx* deriv) {
  Cplx v = z, d = 1.0;
  for (int k = 0; k < depth; ++k) {
    if (std::norm(v) > 1e90) {  // blown-up trial point; report a huge residual
      if (deriv) *deriv = 1.0;
      return Cplx(1e90, 0.0);
    }
    d *= 2.0 * v;
    v = v * v + c;
  }
  if (deriv) *deriv = d;
  return v;
}

inline Cplx eval_parameter(Cplx c, int depth, Cplx* deriv) {
  Cplx v = c, d = 1.0;  // critical-value orbit v_0 = c, dv_0/dc = 1
  for (int k = 0; k < depth; ++k) {
    if (std::norm(v) > 1e90) {
      if (deriv) *deriv = 1.0;
      return Cplx(1e90, 0.0);
    }
    d = 2.0 * v * d + 1.0;
    v = v * v + c;
  }
  if (deriv) *deriv = d;
  return v;
}

}  // namespace detail

/// Continuation cursor along one external ray. Potentials are walked
/// downward in multiplicative steps of 2^{-1/steps_per_halving}, each
/// Newton solve seeded by the nearest memoized sample above, so arbitrary
/// potentials can be queried in any order.
class RayCursor {
 public:
  RayCursor(ExactAngle angle, bool parameter, Cplx c, int steps_per_halving = 8)
      : angle_(angle), parameter_(parameter), c_(c), sph_(steps_per_halving) {
    R0_ = parameter_ ? 1e4 : std::max(1e4, 2.0 + std::abs(c_));
    const double g0 = std::log(R0_);
    const Cplx seed = std::polar(std::exp(g0), kTwoPi * angle_.value());
    memo_.push_back({g0, solve(g0, seed)});
  }

  double top_potential() const { return memo_.front().first; }
  const ExactAngle& angle() const { return angle_; }
  bool parameter() const { return parameter_; }
  Cplx dynamic_c() const { return c_; }

  /// Ray point at potential g (0 < g <= log R0).
  Cplx at(double g) {
    if (!(g > 0.0)) throw std::invalid_argument("ray potential must be positive");
    if (g > memo_.front().first) throw std::invalid_argument("potential above the ray start");
    // nearest memoized sample at or above g
    auto it = std::lower_bound(memo_.begin(), memo_.end(), g,
                               [](const auto& e, double v) { return e.first > v; });
    std::size_t idx = (it == memo_.begin()) ? 0 : static_cast<std::size_t>(it - memo_.begin()) - 1;
    double gc = memo_[idx].first;
    Cplx zc = memo_[idx].second;
    if (std::abs(gc - g) <= 1e-14 * g) return zc;
    const double factor = std::exp2(-1.0 / sph_);
    while (gc > g * (1.0 + 1e-14)) {
      const double gn = std::max(gc * factor, g);
      zc = solve(gn, zc);
      gc = gn;
      memo_.insert(std::upper_bound(memo_.begin(), memo_.end(), gn,
                                    [](double v, const auto& e) { return v > e.first; }),
                   {gn, zc});
    }
    return zc;
  }

 private:
  Cplx solve(double g, Cplx seed) {
    const auto tgt = detail::ray_target(g, angle_, R0_);
    std::optional<Cplx> got;
    if (parameter_) {
      got = detail::damped_newton(seed, tgt,
                                  [&](Cplx c, Cplx* d) { return detail::eval_parameter(c, tgt.depth, d); });
    } else {
      got = detail::damped_newton(seed, tgt,
                                  [&](Cplx z, Cplx* d) { return detail::eval_dynamic(c_, z, tgt.depth, d); });
    }
    if (!got)
      throw NewtonStall((parameter_ ? std::string("parameter") : std::string("dynamic")) +
                        " ray " + angle_.str() + " stalled at potential " + std::to_string(g));
    return *got;
  }

  ExactAngle angle_;
  bool parameter_;
  Cplx c_;
  int sph_;
  double R0_;
  std::vector<std::pair<double, Cplx>> memo_;  // potentials descending
};

namespace detail {

inline RayPolyline trace_ray(RayCursor& cur, double g_min, int steps_per_halving) {
  RayPolyline out;
  out.angle = cur.angle();
  out.parameter = cur.parameter();
  out.c = cur.dynamic_c();
  const double g0 = cur.top_potential();
  const double factor = std::exp2(-1.0 / steps_per_halving);
  double g = g0;
  while (g >= g_min * (1.0 - 1e-12)) {
    try {
      out.samples.push_back({g, cur.at(g)});
    } catch (const NewtonStall&) {
      out.stalled = true;
      break;
    }
    g *= factor;
  }
  return out;
}

// Extrapolates the limit of a sequence with asymptotically geometric
// gaps from its last three (or four, for the error estimate) entries.
inline RayLanding geometric_extrapolate(const std::vector<Cplx>& seq) {
  const std::size_t n = seq.size();
  if (n < 3) return {seq.back(), std::abs(seq[n - 1] - seq[n - 2])};
  auto extrap = [&](std::size_t last) {
    const Cplx d1 = seq[last - 1] - seq[last - 2];
    const Cplx d2 = seq[last] - seq[last - 1];
    if (std::abs(d2) == 0.0) return seq[last];
    const Cplx rho = d2 / d1;
    if (std::abs(rho) > 0.9) return seq[last];
    return seq[last] + d2 * rho / (1.0 - rho);
  };
  const Cplx e2 = extrap(n - 1);
  double err;
  if (n >= 4) {
    err = std::abs(e2 - extrap(n - 2)) + 1e-16 * (1.0 + std::abs(e2));
  } else {
    err = std::abs(e2 - seq.back());
  }
  return {e2, err};
}

// Shared landing loop: samples the ray at potentials g0 / 2^{jp} until
// the gaps pass tol, then extrapolates the geometric tail.
inline RayLanding land_from_cursor(RayCursor& cur, int p, double r0, double tol,
                                   std::vector<Cplx>* seq_out, std::vector<double>* ratios_out) {
  if (!(r0 > 1.0)) throw std::invalid_argument("r0 must exceed 1");
  std::vector<Cplx> seq;
  std::vector<double> gaps;
  double g = std::min(std::log(r0), cur.top_potential());
  int slow = 0;
  for (int j = 0; j < 64; ++j) {
    seq.push_back(cur.at(g));
    if (seq.size() >= 2) {
      const double gap = std::abs(seq[seq.size() - 1] - seq[seq.size() - 2]);
      gaps.push_back(gap);
      const double floor = 1e-14 * (1.0 + std::abs(seq.back()));
      if (gap < std::max(tol, floor)) break;
      if (gaps.size() >= 2 && seq.size() > 5) {
        slow = (gap >= 0.97 * gaps[gaps.size() - 2]) ? slow + 1 : 0;
        if (slow >= 3) throw NoCauchy("landing gaps are not decreasing");
      }
    }
    g = std::ldexp(g, -p);
  }
  if (seq.size() >= 2 && gaps.back() >= std::max(tol, 1e-12))
    throw NoCauchy("landing sequence did not reach tolerance");
  if (seq_out) *seq_out = seq;
  if (ratios_out) {
    ratios_out->clear();
    for (std::size_t i = 1; i < gaps.size(); ++i)
      if (gaps[i - 1] > 0.0) ratios_out->push_back(gaps[i] / gaps[i - 1]);
  }
  return geometric_extrapolate(seq);
}

}  // namespace detail

/// Dynamic ray R_c(t), sampled from potential log R0 down to g_min.
inline RayPolyline trace_dynamic_ray(Cplx c, ExactAngle t, double g_min,
                                     int steps_per_halving = 8) {
  if (!(g_min > 0.0)) throw std::invalid_argument("g_min must be positive");
  RayCursor cur(t, false, c, steps_per_halving);
  return detail::trace_ray(cur, g_min, steps_per_halving);
}

/// Parameter ray R_M(theta), Newton in c on the critical-value orbit.
inline RayPolyline trace_parameter_ray(ExactAngle theta, double g_min,
                                       int steps_per_halving = 8) {
  if (!(g_min > 0.0)) throw std::invalid_argument("g_min must be positive");
  RayCursor cur(theta, true, Cplx(0, 0), steps_per_halving);
  return detail::trace_ray(cur, g_min, steps_per_halving);
}

/// Landing point of a dynamic ray by geometric extrapolation of the
/// potential-halving sequence.
inline RayLanding land_dynamic_ray(Cplx c, ExactAngle t, double tol = 1e-9, double r0 = 2.0,
                                   int steps_per_halving = 8) {
  RayCursor cur(t, false, c, steps_per_halving);
  return detail::land_from_cursor(cur, 1, r0, tol, nullptr, nullptr);
}

/// The Lemma-V sample sequence c_n = Phi_M^{-1}(r0^{1/2^{np}} e^{2 pi i theta})
/// with the extrapolated landing point and the successive gap ratios.
struct ParameterLanding {
  Cplx c_hat;
  double est_error;
  std::vector<Cplx> sequence;
  std::vector<double> ratios;
};

inline ParameterLanding land_parameter_ray(ExactAngle theta, int p, double r0 = 2.0,
                                           double tol = 1e-9, int steps_per_halving = 8) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  RayCursor cur(theta, true, Cplx(0, 0), steps_per_halving);
  ParameterLanding out;
  const RayLanding land = detail::land_from_cursor(cur, p, r0, tol, &out.sequence, &out.ratios);
  out.c_hat = land.point;
  out.est_error = land.est_error;
  return out;
}

}  // namespace rayflow
