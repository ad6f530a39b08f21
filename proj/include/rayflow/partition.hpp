#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rayflow/itinerary.hpp"
#include "rayflow/ray.hpp"

namespace rayflow {

/// The separating curve of the itinerary partition: the two dynamic rays
/// at angles theta/2 and (theta+1)/2 joined through the critical point 0
/// and closed far outside. W0 is the side containing the critical value.
///
/// For c on the parameter ray the two branch rays terminate at 0 at
/// potential G(c)/2, so tracing stops just above that level; at the
/// landing parameter itself (G(c) = 0) they are traced down to g_min.
class PartitionCurve {
 public:
  PartitionCurve(Cplx c, ExactAngle theta, double g_min = 1e-6, int steps_per_halving = 8,
                 double snap = 1e-9)
      : c_(c), theta_(theta), snap_(snap) {
    if (theta.is_zero()) throw std::invalid_argument("partition needs a nonzero angle");
    const double gc = mandelbrot_potential(c);
    const double g_stop = std::max(g_min, 0.5 * gc * (1.0 + 1e-4));
    branch_lo_ = trace_dynamic_ray(c, theta.half(), g_stop, steps_per_halving);
    branch_hi_ = trace_dynamic_ray(c, theta.half_plus(), g_stop, steps_per_halving);
    if (branch_lo_.samples.empty() || branch_hi_.samples.empty())
      throw NewtonStall("partition ray trace produced no samples");
    build_polygon();
    parity_c_ = crossing_parity(c_);
  }

  Cplx c() const { return c_; }
  const ExactAngle& theta() const { return theta_; }
  double snap() const { return snap_; }
  const RayPolyline& branch_lo() const { return branch_lo_; }
  const RayPolyline& branch_hi() const { return branch_hi_; }

  /// 0 on the critical-value side, 1 on the other, * within snap of the
  /// curve or of the critical point.
  Sym classify(Cplx z) const {
    if (std::abs(z) < snap_) return Sym::star;
    bool parity = false;
    const double zx = z.real(), zy = z.imag();
    const double snap2 = snap_ * snap_;
    const std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Cplx& a = poly_[i];
      const Cplx& b = poly_[(i + 1) % n];
      if ((a.imag() > zy) != (b.imag() > zy)) {
        const double x =
            a.real() + (zy - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        if (x > zx) parity = !parity;
      }
      // squared distance to the segment, only trusted near the curve
      const double ax = b.real() - a.real(), ay = b.imag() - a.imag();
      const double px = zx - a.real(), py = zy - a.imag();
      const double len2 = ax * ax + ay * ay;
      double t = len2 > 0.0 ? (px * ax + py * ay) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dx = px - t * ax, dy = py - t * ay;
      if (dx * dx + dy * dy < snap2) return Sym::star;
    }
    return parity == parity_c_ ? Sym::s0 : Sym::s1;
  }

 private:
  bool crossing_parity(Cplx z) const {
    bool parity = false;
    const double zx = z.real(), zy = z.imag();
    const std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Cplx& a = poly_[i];
      const Cplx& b = poly_[(i + 1) % n];
      if ((a.imag() > zy) != (b.imag() > zy)) {
        const double x =
            a.real() + (zy - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        if (x > zx) parity = !parity;
      }
    }
    return parity;
  }

  void build_polygon() {
    // 0 -> hi branch outward -> far arc -> lo branch inward -> (closes at 0)
    poly_.clear();
    poly_.push_back(Cplx(0.0, 0.0));
    for (auto it = branch_hi_.samples.rbegin(); it != branch_hi_.samples.rend(); ++it)
      poly_.push_back(it->point);
    const Cplx end_hi = branch_hi_.samples.front().point;
    const Cplx end_lo = branch_lo_.samples.front().point;
    const double R = 1.05 * std::max(std::abs(end_hi), std::abs(end_lo));
    double a1 = std::arg(end_hi), a2 = std::arg(end_lo);
    if (a2 < a1) a2 += kTwoPi;  // walk counterclockwise; label anchoring fixes the side
    const int arc_steps = 64;
    for (int k = 0; k <= arc_steps; ++k) {
      const double a = a1 + (a2 - a1) * k / arc_steps;
      poly_.push_back(std::polar(R, a));
    }
    for (const auto& s : branch_lo_.samples) poly_.push_back(s.point);
  }

  Cplx c_;
  ExactAngle theta_;
  double snap_;
  RayPolyline branch_lo_, branch_hi_;
  std::vector<Cplx> poly_;
  bool parity_c_ = false;
};

inline PartitionCurve build_partition(Cplx c, ExactAngle theta, double g_min = 1e-6,
                                      int steps_per_halving = 8, double snap = 1e-9) {
  return PartitionCurve(c, theta, g_min, steps_per_halving, snap);
}

inline Sym classify_side(const PartitionCurve& part, Cplx z) { return part.classify(z); }

}  // namespace rayflow
