#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rayflow/orbit.hpp"
#include "rayflow/parallel.hpp"

namespace rayflow {

/// Row-major RGB raster with a complex-plane viewport, origin top-left.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 bytes per pixel
  Cplx center;
  double scale = 0.0;  // plane units per pixel

  ImageBuffer(int w, int h, Cplx ctr, double scl)
      : width(w), height(h), pixels(3 * static_cast<std::size_t>(w) * h, 0), center(ctr),
        scale(scl) {
    if (w <= 0 || h <= 0 || !(scl > 0.0)) throw std::invalid_argument("bad viewport");
  }

  Cplx plane_of(int px, int py) const {
    return center + Cplx((px - width / 2.0 + 0.5) * scale, (height / 2.0 - py - 0.5) * scale);
  }

  void set(int px, int py, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t at = 3 * (static_cast<std::size_t>(py) * width + px);
    pixels[at] = r;
    pixels[at + 1] = g;
    pixels[at + 2] = b;
  }

  bool plot(Cplx z, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int px = static_cast<int>(std::floor((z.real() - center.real()) / scale + width / 2.0));
    const int py = static_cast<int>(std::floor(height / 2.0 - (z.imag() - center.imag()) / scale));
    if (px < 0 || px >= width || py < 0 || py >= height) return false;
    set(px, py, r, g, b);
    return true;
  }
};

/// Binary PPM, header exactly "P6\n<w> <h>\n255\n".
inline void write_ppm(const ImageBuffer& img, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fprintf(fp, "P6\n%d %d\n255\n", img.width, img.height);
  std::fwrite(img.pixels.data(), 1, img.pixels.size(), fp);
  std::fclose(fp);
}

/// Escape-time rendering of J(f_c), grayscale by the smoothed iteration
/// count; interior stays dark.
inline ImageBuffer render_julia_escape(Cplx c, int width, int height, Cplx center, double scale,
                                       int max_iter = 512) {
  ImageBuffer img(width, height, center, scale);
  const double R = std::max(1e4, 2.0 + std::abs(c));
  const double logR = std::log(R);
  parallel_for(static_cast<std::size_t>(height), [&](std::size_t py) {
    for (int px = 0; px < width; ++px) {
      Cplx z = img.plane_of(px, static_cast<int>(py));
      int n = 0;
      while (n < max_iter && std::norm(z) <= R * R) {
        z = z * z + c;
        ++n;
      }
      std::uint8_t shade = 0;
      if (n < max_iter) {
        const double smooth = n + 1.0 - std::log2(std::log(std::abs(z)) / logR);
        const double v = std::pow(std::min(smooth, double(max_iter)) / max_iter, 0.25);
        shade = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
      }
      img.set(px, static_cast<int>(py), shade, shade, shade);
    }
  });
  return img;
}

/// Inverse-iteration point plot of J(f_c): random backward orbit after a
/// burn-in, deterministic for a fixed seed.
inline ImageBuffer render_julia_inverse(Cplx c, int width, int height, Cplx center, double scale,
                                        int points = 200000, std::uint64_t seed = 1) {
  ImageBuffer img(width, height, center, scale);
  std::mt19937_64 rng(seed);
  Cplx z = 0.5 * (1.0 + std::sqrt(Cplx(1.0) - 4.0 * c));  // beta fixed point is on J
  const int burn = 64;
  for (int i = 0; i < burn + points; ++i) {
    Cplx w = std::sqrt(z - c);
    if (rng() & 1) w = -w;
    z = w;
    if (i >= burn) img.plot(z, 255, 255, 255);
  }
  return img;
}

/// Sampled Julia points via inverse iteration (for CSV/tests).
inline std::vector<Cplx> julia_inverse_cloud(Cplx c, int points, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<Cplx> out;
  out.reserve(points);
  Cplx z = 0.5 * (1.0 + std::sqrt(Cplx(1.0) - 4.0 * c));
  const int burn = 64;
  for (int i = 0; i < burn + points; ++i) {
    Cplx w = std::sqrt(z - c);
    if (rng() & 1) w = -w;
    z = w;
    if (i >= burn) out.push_back(z);
  }
  return out;
}

}  // namespace rayflow
