#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rayflow/orbit.hpp"

namespace rayflow {

/// Uniform-grid bucket index over a point cloud; nearest-neighbor queries
/// expand square rings until the ring floor distance passes the best hit.
class PointGrid {
 public:
  explicit PointGrid(const std::vector<Cplx>& pts) : pts_(pts) {
    if (pts.empty()) throw std::invalid_argument("empty point cloud");
    double lox = pts[0].real(), hix = lox, loy = pts[0].imag(), hiy = loy;
    for (const Cplx& p : pts) {
      lox = std::min(lox, p.real());
      hix = std::max(hix, p.real());
      loy = std::min(loy, p.imag());
      hiy = std::max(hiy, p.imag());
    }
    const double diag = std::hypot(hix - lox, hiy - loy);
    cell_ = std::max(diag / std::sqrt(static_cast<double>(pts.size())), 1e-300);
    ox_ = lox;
    oy_ = loy;
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[key_of(pts[i])].push_back(i);
  }

  double nearest_dist(Cplx q) const {
    std::size_t ignored;
    return nearest(q, &ignored);
  }

  double nearest(Cplx q, std::size_t* index) const {
    const std::int64_t qi = cx(q.real()), qj = cy(q.imag());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::int64_t r = 0;; ++r) {
      if (r > 0 && (static_cast<double>(r) - 1.0) * cell_ >= best) break;
      bool any_cell = false;
      for (std::int64_t i = qi - r; i <= qi + r; ++i) {
        for (std::int64_t j = qj - r; j <= qj + r; ++j) {
          if (std::max(std::llabs(i - qi), std::llabs(j - qj)) != r) continue;
          auto it = buckets_.find(pack(i, j));
          if (it == buckets_.end()) continue;
          any_cell = true;
          for (std::size_t idx : it->second) {
            const double d = std::abs(pts_[idx] - q);
            if (d < best || (d == best && idx < best_i)) {
              best = d;
              best_i = idx;
            }
          }
        }
      }
      // keep expanding until something was seen and the ring floor passes best
      if (!any_cell && r > 2 && !std::isfinite(best) &&
          r > static_cast<std::int64_t>(2 * std::sqrt(static_cast<double>(pts_.size()))) + 4) {
        // pathological spread; fall back to a full scan
        for (std::size_t idx = 0; idx < pts_.size(); ++idx) {
          const double d = std::abs(pts_[idx] - q);
          if (d < best) {
            best = d;
            best_i = idx;
          }
        }
        break;
      }
    }
    *index = best_i;
    return best;
  }

 private:
  std::int64_t cx(double x) const { return static_cast<std::int64_t>(std::floor((x - ox_) / cell_)); }
  std::int64_t cy(double y) const { return static_cast<std::int64_t>(std::floor((y - oy_) / cell_)); }
  std::int64_t key_of(Cplx p) const { return pack(cx(p.real()), cy(p.imag())); }
  static std::int64_t pack(std::int64_t i, std::int64_t j) {
    return (i << 32) ^ (j & 0xffffffffll);
  }

  const std::vector<Cplx>& pts_;
  double cell_, ox_, oy_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets_;
};

/// Directed sup-inf distance a -> b, grid accelerated.
inline double directed_hausdorff(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  const PointGrid grid(b);
  double worst = 0.0;
  for (const Cplx& p : a) worst = std::max(worst, grid.nearest_dist(p));
  return worst;
}

inline double hausdorff_distance(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

/// Brute-force oracle for small clouds.
inline double hausdorff_distance_brute(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  auto directed = [](const std::vector<Cplx>& u, const std::vector<Cplx>& v) {
    double worst = 0.0;
    for (const Cplx& p : u) {
      double best = std::numeric_limits<double>::infinity();
      for (const Cplx& q : v) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace rayflow
