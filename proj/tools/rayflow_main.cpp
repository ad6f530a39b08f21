// rayflow: external rays, Misiurewicz landings, and holomorphic-motion
// verification suites for f_c(z) = z^2 + c.
//
// Verbs: ray, land, julia, motion, verify, symbolic.
// Exit codes: 0 pass, 1 verification failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rayflow/rayflow.hpp"

using namespace rayflow;

namespace {

struct Defaults {
  double tol = 1e-12;
  double r0 = 2.0;
  double nu = 0.1;
  int depth = 60;
  int steps_per_halving = 8;
  std::uint64_t seed = 0x5eed5eedULL;
};

// Optional key=value config file; CLI flags win over file entries.
Defaults load_config(const std::string& path) {
  Defaults d;
  if (path.empty()) return d;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "tol") d.tol = std::stod(val);
    else if (key == "r0") d.r0 = std::stod(val);
    else if (key == "nu") d.nu = std::stod(val);
    else if (key == "depth") d.depth = std::stoi(val);
    else if (key == "steps_per_halving") d.steps_per_halving = std::stoi(val);
    else if (key == "seed") d.seed = std::stoull(val);
    else throw CLI::ValidationError("config", "unknown key: " + key);
  }
  return d;
}

ExactAngle angle_arg(const std::string& text) {
  if (text.find('.') != std::string::npos)
    throw CLI::ValidationError("--angle", "decimal angles rejected; use an exact fraction p/q");
  return parse_angle(text);
}

std::vector<double> parse_eps_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("--eps", "empty list");
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text(out_path, text);
  }
}

int finish_report(const VerificationReport& rep, const std::string& out_path) {
  emit(out_path, report_to_json(rep).dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"external rays and holomorphic motion for z^2 + c"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value defaults file");

  // --- ray ------------------------------------------------------------
  auto* ray_cmd = app.add_subcommand("ray", "trace a dynamic or parameter ray to CSV");
  std::string ray_angle, ray_kind = "parameter", ray_out;
  double ray_gmin = 1e-5, ray_cre = 0.0, ray_cim = 0.0;
  int ray_sph = 0;
  ray_cmd->add_option("--angle", ray_angle, "exact fraction p/q")->required();
  ray_cmd->add_option("--kind", ray_kind, "parameter|dynamic")
      ->check(CLI::IsMember({"parameter", "dynamic"}));
  ray_cmd->add_option("--gmin", ray_gmin, "lowest potential");
  ray_cmd->add_option("--c-re", ray_cre, "dynamic-plane parameter, real part");
  ray_cmd->add_option("--c-im", ray_cim, "dynamic-plane parameter, imaginary part");
  ray_cmd->add_option("--steps", ray_sph, "samples per potential halving");
  ray_cmd->add_option("--out", ray_out, "output file (default stdout)");

  // --- land -----------------------------------------------------------
  auto* land_cmd = app.add_subcommand("land", "land a parameter ray, JSON output");
  std::string land_angle, land_out;
  int land_p = 0;
  double land_r0 = 0.0, land_tol = 1e-9;
  land_cmd->add_option("--angle", land_angle, "exact fraction p/q")->required();
  land_cmd->add_option("--p", land_p, "doubling block size of the Lemma-V sequence");
  land_cmd->add_option("--r0", land_r0, "starting radius > 1");
  land_cmd->add_option("--tol", land_tol, "gap tolerance");
  land_cmd->add_option("--out", land_out, "output file (default stdout)");

  // --- julia ----------------------------------------------------------
  auto* julia_cmd = app.add_subcommand("julia", "render J(f_c) to PPM");
  double j_cre = 0.0, j_cim = 0.0, j_scale = 0.0, j_ctr_re = 0.0, j_ctr_im = 0.0;
  int j_w = 512, j_h = 512, j_iter = 512, j_points = 200000;
  std::string j_method = "escape", j_out = "julia.ppm";
  std::uint64_t j_seed = 1;
  julia_cmd->add_option("--c-re", j_cre)->required();
  julia_cmd->add_option("--c-im", j_cim);
  julia_cmd->add_option("--width", j_w);
  julia_cmd->add_option("--height", j_h);
  julia_cmd->add_option("--center-re", j_ctr_re);
  julia_cmd->add_option("--center-im", j_ctr_im);
  julia_cmd->add_option("--scale", j_scale, "plane units per pixel (default fits radius 2.2)");
  julia_cmd->add_option("--method", j_method)->check(CLI::IsMember({"escape", "inverse"}));
  julia_cmd->add_option("--max-iter", j_iter);
  julia_cmd->add_option("--points", j_points, "inverse-iteration samples");
  julia_cmd->add_option("--seed", j_seed);
  julia_cmd->add_option("--out", j_out, "output PPM path");

  // --- motion ---------------------------------------------------------
  auto* motion_cmd =
      app.add_subcommand("motion", "holomorphic-motion frames along a parameter ray");
  std::string m_angle, m_outdir = "motion_out", m_word;
  int m_frames = 12, m_wordlen = 8, m_width = 512, m_depth = 0;
  double m_g0 = 0.25, m_scale = 0.0;
  motion_cmd->add_option("--angle", m_angle)->required();
  motion_cmd->add_option("--frames", m_frames, "number of ray frames");
  motion_cmd->add_option("--word-len", m_wordlen, "cloud word length");
  motion_cmd->add_option("--word", m_word, "single itinerary to track (CSV of path instead)");
  motion_cmd->add_option("--g0", m_g0, "starting potential");
  motion_cmd->add_option("--depth", m_depth, "pullback depth");
  motion_cmd->add_option("--width", m_width, "frame size in pixels");
  motion_cmd->add_option("--scale", m_scale, "plane units per pixel");
  motion_cmd->add_option("--outdir", m_outdir, "output directory");

  // --- verify ---------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run a quantitative verification suite");
  verify_cmd->require_subcommand(1);
  std::string v_angle = "1/2", v_eps = "1e-2,1e-3,1e-4", v_out;
  int v_samples = 200, v_wordlen = 10, v_depth = 0, v_horizon = 40;
  double v_nu = 0.0;
  std::string v_word;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--angle", v_angle, "exact fraction p/q");
    sub->add_option("--eps", v_eps, "comma list of distances to c-hat");
    sub->add_option("--samples", v_samples);
    sub->add_option("--word-len", v_wordlen);
    sub->add_option("--word", v_word, "itinerary, e.g. '0(1)'");
    sub->add_option("--depth", v_depth);
    sub->add_option("--horizon", v_horizon);
    sub->add_option("--nu", v_nu, "critical disk radius");
    sub->add_option("--out", v_out, "report file (default stdout)");
  };
  auto* v_main = verify_cmd->add_subcommand("main-bound", "K-hat stability + Prop 3.1");
  auto* v_zcyc = verify_cmd->add_subcommand("zcycles", "Lemma A/B/C suite");
  auto* v_lemt = verify_cmd->add_subcommand("lemma-t", "dist(0, J) scaling");
  auto* v_haus = verify_cmd->add_subcommand("hausdorff", "Hausdorff-distance scaling");
  auto* v_hold = verify_cmd->add_subcommand("holder", "motion limit + Hoelder quotient");
  auto* v_derf = verify_cmd->add_subcommand("derivative-formula", "series vs closed form");
  auto* v_semi = verify_cmd->add_subcommand("semiconjugacy", "fiber structure at c-hat");
  for (auto* sub : {v_main, v_zcyc, v_lemt, v_haus, v_hold, v_derf, v_semi}) add_common(sub);

  // --- symbolic -------------------------------------------------------
  auto* sym_cmd = app.add_subcommand("symbolic", "exact angle combinatorics");
  sym_cmd->require_subcommand(1);
  std::string s_angle, s_t, s_a, s_b, s_out;
  auto* s_knead = sym_cmd->add_subcommand("kneading", "kneading sequence of an angle");
  s_knead->add_option("--angle", s_angle)->required();
  s_knead->add_option("--out", s_out);
  auto* s_class = sym_cmd->add_subcommand("classify", "preperiod/period under doubling");
  s_class->add_option("--angle", s_angle)->required();
  s_class->add_option("--out", s_out);
  auto* s_equiv = sym_cmd->add_subcommand("equiv", "test a ~_e b");
  s_equiv->add_option("--angle", s_angle, "angle whose kneading sequence is e")->required();
  s_equiv->add_option("--a", s_a, "itinerary")->required();
  s_equiv->add_option("--b", s_b, "itinerary")->required();
  s_equiv->add_option("--out", s_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    const Defaults cfg = load_config(config_path);

    if (*ray_cmd) {
      const ExactAngle theta = angle_arg(ray_angle);
      const int sph = ray_sph > 0 ? ray_sph : cfg.steps_per_halving;
      const RayPolyline ray =
          ray_kind == "parameter"
              ? trace_parameter_ray(theta, ray_gmin, sph)
              : trace_dynamic_ray(Cplx(ray_cre, ray_cim), theta, ray_gmin, sph);
      emit(ray_out, ray_to_csv(ray));
      return ray.stalled ? 1 : 0;
    }

    if (*land_cmd) {
      const ExactAngle theta = angle_arg(land_angle);
      if (theta.is_zero()) {
        std::cerr << "land: angle 0 is excluded (no landing ray)\n";
        return 2;
      }
      const AngleClassification cls = classify_angle(theta);
      const int p = land_p > 0 ? land_p : std::max(cls.period, 1);
      const double r0 = land_r0 > 1.0 ? land_r0 : cfg.r0;
      const ParameterLanding land = land_parameter_ray(theta, p, r0, land_tol);
      emit(land_out,
           landing_to_json(theta, land.c_hat, land.est_error, land.sequence.size()).dump(2) +
               "\n");
      return 0;
    }

    if (*julia_cmd) {
      const Cplx c(j_cre, j_cim);
      const double scale = j_scale > 0.0 ? j_scale : 4.4 / j_w;
      const Cplx center(j_ctr_re, j_ctr_im);
      const ImageBuffer img =
          j_method == "escape"
              ? render_julia_escape(c, j_w, j_h, center, scale, j_iter)
              : render_julia_inverse(c, j_w, j_h, center, scale, j_points, j_seed);
      write_ppm(img, j_out);
      return 0;
    }

    if (*motion_cmd) {
      const ExactAngle theta = angle_arg(m_angle);
      const MisiurewiczRay ray = analyze_ray(theta);
      std::filesystem::create_directories(m_outdir);
      MotionOptions mopt;
      if (m_depth > 0) mopt.depth = m_depth;
      std::vector<double> potentials;
      for (int k = 0; k < m_frames - 1; ++k) potentials.push_back(m_g0 * std::exp2(-k));
      if (!m_word.empty()) {
        const MotionPath path = follow_motion(theta, parse_itinerary(m_word), potentials, mopt);
        write_text(m_outdir + "/path.csv", motion_to_csv(path));
        return 0;
      }
      // frame clouds: all words of length word-len with constant tail, plus
      // the per-frame Hausdorff distance to the landing cloud
      std::vector<ItinerarySeq> words;
      for (std::uint64_t m = 0; m < (1ull << m_wordlen); ++m) {
        std::vector<Sym> prefix(m_wordlen);
        for (int k = 0; k < m_wordlen; ++k) prefix[k] = (m >> k) & 1 ? Sym::s1 : Sym::s0;
        words.push_back(word_with_tail(prefix, ItinerarySeq::constant(Sym::s1)));
      }
      SuiteOptions sopt;
      if (m_depth > 0) sopt.depth = m_depth;
      std::string csv = "frame,potential,c_re,c_im,d_H\n";
      auto hat = realize_batch(ray.c_hat, theta, words, sopt.depth, sopt.hat_realize_tol,
                                       sopt.hat_partition_g_min);
      std::vector<Cplx> hat_cloud;
      for (const auto& q : hat.points)
        if (q) hat_cloud.push_back(q->position);
      RayCursor cur(theta, true, Cplx(0, 0));
      const double scale = m_scale > 0.0 ? m_scale : 4.4 / m_width;
      for (int f = 0; f < m_frames; ++f) {
        const bool last = f == m_frames - 1;
        const Cplx c = last ? ray.c_hat : cur.at(potentials[f]);
        auto batch = last ? std::move(hat)
                          : realize_batch(c, theta, words, sopt.depth, sopt.realize_tol,
                                                  sopt.partition_g_min);
        std::vector<Cplx> cloud;
        for (const auto& q : batch.points)
          if (q) cloud.push_back(q->position);
        ImageBuffer img(m_width, m_width, Cplx(0, 0), scale);
        for (const Cplx& z : cloud) img.plot(z, 255, 255, 255);
        char name[64];
        std::snprintf(name, sizeof name, "/frame_%03d.ppm", f);
        write_ppm(img, m_outdir + name);
        const double dh = hausdorff_distance(cloud, hat_cloud);
        csv += std::to_string(f) + "," + fmt_double(last ? 0.0 : potentials[f]) + "," +
               fmt_double(c.real()) + "," + fmt_double(c.imag()) + "," + fmt_double(dh) + "\n";
      }
      write_text(m_outdir + "/hausdorff.csv", csv);
      return 0;
    }

    if (*verify_cmd) {
      const ExactAngle theta = angle_arg(v_angle);
      const std::vector<double> eps = parse_eps_list(v_eps);
      SuiteOptions opt;
      opt.seed = cfg.seed;
      if (v_depth > 0) opt.depth = v_depth;
      opt.horizon = v_horizon;
      const double nu = v_nu > 0.0 ? v_nu : cfg.nu;

      if (*v_main) return finish_report(verify_main_bound(theta, eps, v_samples, opt), v_out);
      if (*v_zcyc) return finish_report(verify_zcycles(theta, eps, nu, v_samples, opt), v_out);
      if (*v_lemt) return finish_report(dist_zero_julia(theta, eps, v_samples, opt), v_out);
      if (*v_haus) return finish_report(hausdorff_scaling(theta, eps, v_wordlen, opt), v_out);
      if (*v_derf) {
        const std::vector<Cplx> cs = {Cplx(-3, 0), Cplx(3, 0), Cplx(-2.5, 0), Cplx(-2.001, 0)};
        return finish_report(derivative_formula_check(cs), v_out);
      }
      if (*v_semi) return finish_report(semiconjugacy_check(theta, v_wordlen, opt), v_out);
      if (*v_hold) {
        MotionLimitOptions mopt;
        if (v_depth > 0) mopt.depth = v_depth;
        const ItinerarySeq word =
            v_word.empty() ? kneading(theta).prepended(Sym::s1) : parse_itinerary(v_word);
        return finish_report(motion_limit_crosscheck(theta, word, mopt), v_out);
      }
    }

    if (*sym_cmd) {
      const ExactAngle theta = angle_arg(s_angle);
      nlohmann::ordered_json j;
      if (*s_knead) {
        if (theta.is_zero()) {
          std::cerr << "kneading: angle 0 is excluded\n";
          return 2;
        }
        j["angle"] = theta.str();
        j["kneading"] = kneading(theta).str();
      } else if (*s_class) {
        const AngleClassification cls = classify_angle(theta);
        j["angle"] = theta.str();
        j["preperiod"] = cls.preperiod;
        j["period"] = cls.period;
        j["recurrent"] = cls.recurrent;
      } else if (*s_equiv) {
        const ItinerarySeq e = kneading(theta);
        const bool eq = equivalent_wrt(e, parse_itinerary(s_a), parse_itinerary(s_b));
        j["angle"] = theta.str();
        j["e"] = e.str();
        j["a"] = s_a;
        j["b"] = s_b;
        j["equivalent"] = eq;
      }
      emit(s_out, j.dump(2) + "\n");
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
