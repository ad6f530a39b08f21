#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rayflow/itinerary.hpp"
#include "rayflow/partition.hpp"
#include "rayflow/ray.hpp"

namespace rayflow {

struct DepthInsufficient : std::runtime_error {
  explicit DepthInsufficient(const std::string& what) : std::runtime_error(what) {}
};

struct BranchAmbiguous : std::runtime_error {
  explicit BranchAmbiguous(const std::string& what) : std::runtime_error(what) {}
};

struct Escaped : std::runtime_error {
  explicit Escaped(const std::string& what) : std::runtime_error(what) {}
};

struct DerivEstimate {
  Cplx value;
  double tail_bound = 0.0;
  int terms = 0;
};

/// A point of J(f_c) realized from an itinerary by branch-consistent
/// pullback. `orbit` keeps the pullback intermediates z^(0..depth); entry
/// k realizes sigma^k of the itinerary, so the forward orbit is available
/// at full accuracy without error-amplifying forward iteration.
struct JuliaPoint {
  Cplx c;
  ItinerarySeq itinerary;
  Cplx position;
  double residual = 0.0;
  std::optional<DerivEstimate> d_dc;
  std::vector<Cplx> orbit;
};

/// Per-parameter realization context: the partition curve plus the
/// backward-orbit anchor (the landing point of the critical-value ray,
/// or any point of the basin; pullback contracts the choice away).
struct FrameContext {
  Cplx c;
  ExactAngle theta;
  std::shared_ptr<const PartitionCurve> partition;
  Cplx anchor;
};

inline FrameContext make_frame(Cplx c, ExactAngle theta, double g_min = 1e-6,
                               std::optional<Cplx> anchor = std::nullopt,
                               int steps_per_halving = 8, double snap = 1e-9) {
  FrameContext ctx;
  ctx.c = c;
  ctx.theta = theta;
  ctx.partition = std::make_shared<PartitionCurve>(c, theta, g_min, steps_per_halving, snap);
  if (anchor) {
    ctx.anchor = *anchor;
  } else if (mandelbrot_potential(c) == 0.0) {
    ctx.anchor = c;  // at the landing parameter the theta-ray lands at c itself
  } else {
    ctx.anchor = land_dynamic_ray(c, theta, 1e-10).point;
  }
  return ctx;
}

namespace detail {

// One backward pass: rev[k] realizes sigma^k(s), rev[depth] = anchor.
inline std::vector<Cplx> pullback(const FrameContext& ctx, const ItinerarySeq& s, int depth) {
  std::vector<Cplx> rev(static_cast<std::size_t>(depth) + 1);
  rev[depth] = ctx.anchor;
  Cplx z = ctx.anchor;
  for (int k = depth - 1; k >= 0; --k) {
    const Sym want = s.at(static_cast<std::size_t>(k));
    if (want == Sym::star)
      throw std::invalid_argument("pullback requires a *-free itinerary; resolve via fiber_partner");
    const Cplx w = std::sqrt(z - ctx.c);
    const Sym sa = ctx.partition->classify(w);
    const Sym sb = ctx.partition->classify(-w);
    if (sa == want) {
      z = w;
    } else if (sb == want) {
      z = -w;
    } else if (sa == Sym::star && sb == Sym::star) {
      throw BranchAmbiguous("both pullback branches classify as * at step " + std::to_string(k) +
                            ", |w| = " + std::to_string(std::abs(w)));
    } else if (sa == Sym::star) {
      z = w;  // the other candidate is definitely on the wrong side
    } else if (sb == Sym::star) {
      z = -w;
    } else {
      throw BranchAmbiguous("no pullback branch matches symbol at step " + std::to_string(k));
    }
    rev[k] = z;
  }
  return rev;
}

}  // namespace detail

/// Realizes the point of J(f_c) with the given itinerary. The residual is
/// the change of the final point between pullback depths depth-1 and
/// depth; DepthInsufficient when it exceeds tol.
inline JuliaPoint point_from_itinerary(const FrameContext& ctx, const ItinerarySeq& s, int depth,
                                       double tol = 1e-9) {
  if (depth < 2) throw std::invalid_argument("pullback depth must be >= 2");
  if (!s.infinite() && s.truncation_depth() < static_cast<std::size_t>(depth))
    throw std::invalid_argument("itinerary shorter than the pullback depth");
  JuliaPoint out;
  out.c = ctx.c;
  out.itinerary = s;
  out.orbit = detail::pullback(ctx, s, depth);
  const std::vector<Cplx> shallow = detail::pullback(ctx, s, depth - 1);
  out.position = out.orbit[0];
  out.residual = std::abs(out.orbit[0] - shallow[0]);
  if (!(out.residual < tol))
    throw DepthInsufficient("pullback residual " + std::to_string(out.residual) +
                            " above tolerance at depth " + std::to_string(depth));
  return out;
}

/// Itinerary of a point under forward iteration, one symbol per step.
/// Escapes of the Julia-set bounding disk are an error: the input was not
/// (numerically) on the Julia set.
inline ItinerarySeq itinerary_of_point(const FrameContext& ctx, Cplx z, int n) {
  const double bound = 2.0 + std::abs(ctx.c) + 1.0;
  std::vector<Sym> syms;
  syms.reserve(n);
  for (int k = 0; k < n; ++k) {
    if (std::abs(z) > bound)
      throw Escaped("orbit left the bounding disk at step " + std::to_string(k));
    syms.push_back(ctx.partition->classify(z));
    z = z * z + ctx.c;
  }
  return ItinerarySeq(std::move(syms));
}

}  // namespace rayflow
