#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rayflow/derivative.hpp"
#include "rayflow/julia_points.hpp"
#include "rayflow/misiurewicz.hpp"
#include "rayflow/ray.hpp"
#include "rayflow/report.hpp"
#include "rayflow/symbolic.hpp"

namespace rayflow {

/// A parameter ray landing on a Misiurewicz point, with the landing
/// structure and the kneading sequence: the shared context of every
/// quantitative suite.
struct MisiurewiczRay {
  ExactAngle theta;
  Cplx c_hat;
  MisiurewiczData data;
  ItinerarySeq e;
};

/// Resolves theta -> c_hat: the angle's doubling preperiod a forces the
/// orbit preperiod l = a + 1 and the cycle period ord_2 of the odd part,
/// so the extrapolated ray landing can be polished by the Misiurewicz
/// Newton and cross-validated by landing_data.
inline MisiurewiczRay analyze_ray(ExactAngle theta, double tol = 1e-13) {
  const AngleClassification cls = classify_angle(theta);
  if (theta.is_zero() || cls.preperiod < 1)
    throw std::invalid_argument("angle " + theta.str() +
                                " is not a Misiurewicz angle (needs an even denominator)");
  const int l = cls.preperiod + 1;
  MisiurewiczRay out;
  out.theta = theta;
  const ParameterLanding rough = land_parameter_ray(theta, cls.period, 2.0, 1e-7);
  out.c_hat = solve_misiurewicz(l, cls.period, rough.c_hat, tol);
  out.data = landing_data(out.c_hat, 1e-10);
  out.e = kneading(theta);
  return out;
}

/// Walks a ray cursor to the potential where |c - c_hat| hits eps
/// (relative slack 0.3%); returns {potential, c}.
inline std::pair<double, Cplx> ray_point_at_eps(RayCursor& cur, Cplx c_hat, double eps) {
  auto dist = [&](double g) { return std::abs(cur.at(g) - c_hat); };
  double ghi = std::min(std::log(2.0), cur.top_potential());
  while (dist(ghi) < eps) {
    if (ghi >= cur.top_potential() * 0.99)
      throw std::invalid_argument("eps larger than the whole traced ray");
    ghi = std::min(2.0 * ghi, cur.top_potential());
  }
  double glo = ghi;
  for (int k = 0; k < 200 && dist(glo) >= eps; ++k) glo *= 0.5;
  if (dist(glo) >= eps) throw NoConvergence("could not bracket the target distance");
  // secant in log-log with bisection fallback
  for (int it = 0; it < 80; ++it) {
    const double mhi = dist(ghi), mlo = dist(glo);
    double g = std::exp(std::log(glo) + (std::log(eps) - std::log(mlo)) *
                                            (std::log(ghi) - std::log(glo)) /
                                            (std::log(mhi) - std::log(mlo)));
    if (!(g > glo && g < ghi)) g = std::sqrt(glo * ghi);
    const double m = dist(g);
    if (std::abs(m / eps - 1.0) < 3e-3) return {g, cur.at(g)};
    (m >= eps ? ghi : glo) = g;
  }
  const double g = std::sqrt(glo * ghi);
  return {g, cur.at(g)};
}

struct MotionFrame {
  double potential = 0.0;  // 0 marks the landing frame
  Cplx c;
  bool skipped = false;
  std::string note;
  JuliaPoint point;
};

struct MotionPath {
  ExactAngle theta;
  std::vector<MotionFrame> frames;
};

struct MotionOptions {
  int depth = 60;
  double realize_tol = 1e-8;
  double series_tol = 1e-12;
  double partition_g_min = 1e-6;
  double hat_partition_g_min = 1e-10;  // resolve the curve near 0 at the landing frame
  int steps_per_halving = 8;
};

/// Tracks the point with itinerary s along the parameter ray: one frame
/// per potential (continuation-seeded pullback plus the derivative
/// series), then the landing frame at c_hat realized directly.
inline MotionPath follow_motion(const ExactAngle& theta, const ItinerarySeq& s,
                                const std::vector<double>& potentials,
                                const MotionOptions& opt = {}) {
  for (std::size_t i = 1; i < potentials.size(); ++i)
    if (!(potentials[i] < potentials[i - 1]))
      throw std::invalid_argument("potentials must be strictly decreasing");
  const MisiurewiczRay ray = analyze_ray(theta);
  RayCursor cur(theta, true, Cplx(0, 0), opt.steps_per_halving);
  MotionPath path;
  path.theta = theta;
  std::optional<Cplx> anchor;
  for (double g : potentials) {
    MotionFrame fr;
    fr.potential = g;
    try {
      fr.c = cur.at(g);
      const FrameContext ctx =
          make_frame(fr.c, theta, opt.partition_g_min, anchor, opt.steps_per_halving);
      fr.point = point_from_itinerary(ctx, s, opt.depth, opt.realize_tol);
      fr.point.d_dc = derivative_series(fr.point, opt.series_tol);
      anchor = fr.point.position;
    } catch (const std::exception& ex) {
      fr.skipped = true;
      fr.note = ex.what();
    }
    path.frames.push_back(std::move(fr));
  }
  MotionFrame hat;
  hat.potential = 0.0;
  hat.c = ray.c_hat;
  try {
    const FrameContext ctx = make_frame(ray.c_hat, theta, opt.hat_partition_g_min, std::nullopt,
                                        opt.steps_per_halving);
    hat.point = point_from_itinerary(ctx, s, opt.depth, opt.realize_tol);
  } catch (const std::exception& ex) {
    hat.skipped = true;
    hat.note = ex.what();
  }
  path.frames.push_back(std::move(hat));
  return path;
}

struct MotionLimitOptions {
  double r0 = 2.0;
  int integration_steps_per_halving = 32;
  double subarc_tol = 1e-7;
  int max_subarcs = 48;
  int depth = 60;
  double realize_tol = 1e-8;
  double series_tol = 1e-12;
  double partition_g_min = 1e-6;
  double hat_partition_g_min = 1e-10;
  double discrepancy_tol = 1e-5;
};

/// Theorem 1.2 two ways: z(c_hat) as the improper integral of dz/dc over
/// the Lemma-V subarcs (trapezoid on the traced ray) against the direct
/// pullback realization at c_hat; also reports the Hoelder-1/2 quotient
/// sup_n |z(c_n) - z(c_hat)| / sqrt|c_n - c_hat| over the subdivision.
inline VerificationReport motion_limit_crosscheck(const ExactAngle& theta, const ItinerarySeq& s,
                                                  const MotionLimitOptions& opt = {}) {
  const MisiurewiczRay ray = analyze_ray(theta);
  const int p = ray.data.p;
  RayCursor cur(theta, true, Cplx(0, 0), opt.integration_steps_per_halving);

  const FrameContext ctx_hat =
      make_frame(ray.c_hat, theta, opt.hat_partition_g_min);
  const Cplx z_hat = point_from_itinerary(ctx_hat, s, opt.depth, opt.realize_tol).position;

  const double g0 = std::min(std::log(opt.r0), cur.top_potential());
  Cplx c_prev = cur.at(g0);
  FrameContext ctx = make_frame(c_prev, theta, opt.partition_g_min);
  JuliaPoint zp = point_from_itinerary(ctx, s, opt.depth, opt.realize_tol);
  Cplx integral = zp.position;  // z(c(r0)) + sum of subarc integrals
  Cplx d_prev = derivative_series(zp, opt.series_tol).value;
  std::optional<Cplx> anchor = zp.position;

  double holder_sup = 0.0;
  int holder_argmax = 0;
  int subarcs_used = 0;
  double last_contribution = 0.0;
  const double step = std::exp2(-1.0 / opt.integration_steps_per_halving);

  double g_top = g0;
  for (int n = 0; n < opt.max_subarcs; ++n) {
    const double g_bot = std::ldexp(g0, -(n + 1) * p);
    Cplx contribution = 0.0;
    double g = g_top;
    while (g > g_bot * (1.0 + 1e-12)) {
      g = std::max(g * step, g_bot);
      const Cplx c = cur.at(g);
      ctx = make_frame(c, theta, opt.partition_g_min, anchor);
      const JuliaPoint z = point_from_itinerary(ctx, s, opt.depth, opt.realize_tol);
      const Cplx d = derivative_series(z, opt.series_tol).value;
      contribution += 0.5 * (d_prev + d) * (c - c_prev);
      c_prev = c;
      d_prev = d;
      anchor = z.position;
    }
    integral += contribution;
    g_top = g_bot;
    ++subarcs_used;
    last_contribution = std::abs(contribution);

    const double eps_n = std::abs(c_prev - ray.c_hat);
    if (eps_n > 0.0) {
      const double q = std::abs(*anchor - z_hat) / std::sqrt(eps_n);
      if (q > holder_sup) {
        holder_sup = q;
        holder_argmax = n + 1;
      }
    }
    if (n >= 2 && last_contribution < opt.subarc_tol) break;
  }

  VerificationReport rep;
  rep.name = "motion-limit";
  rep.inputs["theta"] = theta.str();
  rep.inputs["itinerary"] = s.str();
  rep.inputs["r0"] = std::to_string(opt.r0);
  rep.inputs["p"] = std::to_string(p);
  rep.metrics["discrepancy"] = std::abs(integral - z_hat);
  rep.metrics["holder_sup"] = holder_sup;
  rep.metrics["holder_argmax_subarc"] = holder_argmax;
  rep.metrics["subarcs"] = subarcs_used;
  rep.metrics["last_subarc_contribution"] = last_contribution;
  rep.metrics["z_hat_re"] = z_hat.real();
  rep.metrics["z_hat_im"] = z_hat.imag();
  rep.metrics["integral_re"] = integral.real();
  rep.metrics["integral_im"] = integral.imag();
  rep.tolerance_spec = "discrepancy < " + std::to_string(opt.discrepancy_tol) +
                       "; holder quotient finite with interior argmax";
  rep.pass = rep.metrics["discrepancy"] < opt.discrepancy_tol && std::isfinite(holder_sup);
  return rep;
}

}  // namespace rayflow
