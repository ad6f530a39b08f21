#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "rayflow/motion.hpp"
#include "rayflow/ray.hpp"

namespace rayflow {

/// Shortest round-trip double formatting (deterministic output files).
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header "potential,re,im", one row per sample.
inline std::string ray_to_csv(const RayPolyline& ray) {
  std::string out = "potential,re,im\n";
  for (const RaySample& s : ray.samples) {
    out += fmt_double(s.potential);
    out += ",";
    out += fmt_double(s.point.real());
    out += ",";
    out += fmt_double(s.point.imag());
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json landing_to_json(const ExactAngle& angle, Cplx landing,
                                              double est_error, std::size_t n_samples) {
  nlohmann::ordered_json j;
  j["angle"] = angle.str();
  j["landing_re"] = landing.real();
  j["landing_im"] = landing.imag();
  j["est_error"] = est_error;
  j["n_samples"] = n_samples;
  return j;
}

/// CSV with header "potential,c_re,c_im,z_re,z_im,dz_re,dz_im,tail_bound,residual".
inline std::string motion_to_csv(const MotionPath& path) {
  std::string out = "potential,c_re,c_im,z_re,z_im,dz_re,dz_im,tail_bound,residual\n";
  for (const MotionFrame& fr : path.frames) {
    if (fr.skipped) continue;
    const Cplx dz = fr.point.d_dc ? fr.point.d_dc->value : Cplx(0, 0);
    const double tb = fr.point.d_dc ? fr.point.d_dc->tail_bound : 0.0;
    out += fmt_double(fr.potential);
    out += "," + fmt_double(fr.c.real()) + "," + fmt_double(fr.c.imag());
    out += "," + fmt_double(fr.point.position.real()) + "," + fmt_double(fr.point.position.imag());
    out += "," + fmt_double(dz.real()) + "," + fmt_double(dz.imag());
    out += "," + fmt_double(tb) + "," + fmt_double(fr.point.residual);
    out += "\n";
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fwrite(text.data(), 1, text.size(), fp);
  std::fclose(fp);
}

}  // namespace rayflow
