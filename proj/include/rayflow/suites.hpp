#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rayflow/derivative.hpp"
#include "rayflow/hausdorff.hpp"
#include "rayflow/julia_points.hpp"
#include "rayflow/misiurewicz.hpp"
#include "rayflow/motion.hpp"
#include "rayflow/parallel.hpp"
#include "rayflow/report.hpp"
#include "rayflow/symbolic.hpp"
#include "rayflow/zcycle.hpp"

namespace rayflow {

struct SuiteOptions {
  int depth = 60;
  double realize_tol = 1e-7;
  double hat_realize_tol = 1e-4;  // *-passing words floor at sqrt(eps_machine)
  double series_tol = 1e-12;
  double partition_g_min = 1e-6;
  double hat_partition_g_min = 1e-10;
  int horizon = 40;
  std::uint64_t seed = 0x5eed5eedULL;
};

// ---------------------------------------------------------------------------
// word sampling

inline ItinerarySeq word_with_tail(const std::vector<Sym>& prefix, const ItinerarySeq& tail) {
  std::vector<Sym> head = prefix;
  head.insert(head.end(), tail.head().begin(), tail.head().end());
  return ItinerarySeq(std::move(head), *tail.repeat());
}

/// The pair of itineraries degenerating onto the critical point: 0e and
/// 1e realize the two preimages of the ray landing point nearest the
/// critical value, the Remark 1.1 points at theta = 1/2.
inline std::pair<ItinerarySeq, ItinerarySeq> critical_pair(const ItinerarySeq& e) {
  return {e.prepended(Sym::s0), e.prepended(Sym::s1)};
}

/// Periodic word built from a length-m prefix of e: its orbit re-enters
/// the critical disk every m steps, guaranteeing finite Z-cycles.
inline ItinerarySeq periodic_e_prefix(const ItinerarySeq& e, int m) {
  std::vector<Sym> rep;
  rep.reserve(m);
  for (int i = 0; i < m; ++i) rep.push_back(e.at(i));
  return ItinerarySeq({}, std::move(rep));
}

/// Deterministic word sample: random {0,1} prefixes with tails rotating
/// through {1^w, 0^w, e, (01)^w}. The same seed gives the same words.
inline std::vector<ItinerarySeq> sample_words(int count, int prefix_len, const ItinerarySeq& e,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ItinerarySeq tails[4] = {ItinerarySeq::constant(Sym::s1), ItinerarySeq::constant(Sym::s0),
                                 e, ItinerarySeq({}, {Sym::s0, Sym::s1})};
  std::vector<ItinerarySeq> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<Sym> prefix(prefix_len);
    std::uint64_t bits = 0;
    for (int k = 0; k < prefix_len; ++k) {
      if (k % 64 == 0) bits = rng();
      prefix[k] = (bits >> (k % 64)) & 1 ? Sym::s1 : Sym::s0;
    }
    out.push_back(word_with_tail(prefix, tails[i % 4]));
  }
  return out;
}

/// Realization of a word list at one parameter; words that fail realize
/// (depth, branch ambiguity) come back as nullopt in their slot.
struct BatchRealization {
  FrameContext ctx;
  std::vector<std::optional<JuliaPoint>> points;
  int realized = 0;
};

inline BatchRealization realize_batch(Cplx c, const ExactAngle& theta,
                                      const std::vector<ItinerarySeq>& words, int depth,
                                      double tol, double partition_g_min) {
  BatchRealization out;
  out.ctx = make_frame(c, theta, partition_g_min);
  out.points.resize(words.size());
  parallel_for(words.size(), [&](std::size_t i) {
    try {
      out.points[i] = point_from_itinerary(out.ctx, words[i], depth, tol);
    } catch (const std::exception&) {
      out.points[i] = std::nullopt;
    }
  });
  for (const auto& p : out.points)
    if (p) ++out.realized;
  return out;
}

namespace detail {

inline std::string eps_csv(const std::vector<double>& eps) {
  std::string s;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps[i]);
    s += buf;
    if (i + 1 < eps.size()) s += ",";
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Main Theorem: K-hat stability and the Prop 3.1 cross-check

inline VerificationReport verify_main_bound(const ExactAngle& theta,
                                            const std::vector<double>& epsilons, int samples,
                                            const SuiteOptions& opt = {}) {
  const MisiurewiczRay ray = analyze_ray(theta);
  RayCursor cur(theta, true, Cplx(0, 0));
  std::vector<ItinerarySeq> words = sample_words(samples, opt.depth / 2, ray.e, opt.seed);
  const auto [w0, w1] = critical_pair(ray.e);
  words.push_back(w0);
  words.push_back(w1);

  VerificationReport rep;
  rep.name = "main-bound";
  rep.inputs["theta"] = theta.str();
  rep.inputs["eps"] = detail::eps_csv(epsilons);
  rep.inputs["samples"] = std::to_string(samples);

  double khat_min = 1e300, khat_max = 0.0, prop31_max_ratio = 0.0;
  int violations = 0, min_realized = 1 << 30;
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    const auto [g, c] = ray_point_at_eps(cur, ray.c_hat, epsilons[ei]);
    const double eps_m = std::abs(c - ray.c_hat);
    auto batch = realize_batch(c, theta, words, opt.depth, opt.realize_tol,
                                       opt.partition_g_min);
    min_realized = std::min(min_realized, batch.realized);

    const DistBracket db = mandelbrot_distance_estimate(c);
    const double prop31_bound = (1.0 + std::sqrt(1.0 + 6.0 * std::abs(c))) / db.lower;

    std::vector<double> mags(words.size(), 0.0);
    parallel_for(words.size(), [&](std::size_t i) {
      if (!batch.points[i]) return;
      mags[i] = std::abs(derivative_series(*batch.points[i], opt.series_tol).value);
    });
    double khat = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!batch.points[i]) continue;
      khat = std::max(khat, mags[i] * std::sqrt(eps_m));
      if (mags[i] > prop31_bound) ++violations;
      prop31_max_ratio = std::max(prop31_max_ratio, mags[i] / prop31_bound);
    }
    khat_min = std::min(khat_min, khat);
    khat_max = std::max(khat_max, khat);
    rep.metrics["K_hat_" + std::to_string(ei)] = khat;
    rep.metrics["eps_measured_" + std::to_string(ei)] = eps_m;
  }
  const double floor = 0.9 / std::sqrt(6.0);
  rep.metrics["K_hat_ratio"] = khat_max / khat_min;
  rep.metrics["K_hat_min"] = khat_min;
  rep.metrics["prop31_violations"] = violations;
  rep.metrics["prop31_max_ratio"] = prop31_max_ratio;
  rep.metrics["min_realized"] = min_realized;
  rep.tolerance_spec =
      "max/min K_hat < 3; each K_hat >= 0.9/sqrt(6); zero Prop 3.1 violations";
  rep.pass = rep.metrics["K_hat_ratio"] < 3.0 && khat_min >= floor && violations == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Lemmas A, B, C: Z-cycle suite

inline VerificationReport verify_zcycles(const ExactAngle& theta,
                                         const std::vector<double>& epsilons, double nu,
                                         int samples, const SuiteOptions& opt = {}) {
  const MisiurewiczRay ray = analyze_ray(theta);
  RayCursor cur(theta, true, Cplx(0, 0));
  const int depth = std::max(opt.depth, opt.horizon + 45);
  std::vector<ItinerarySeq> words = sample_words(samples, depth / 2, ray.e, opt.seed + 1);
  for (int m = 6; m <= 16; m += 2) words.push_back(periodic_e_prefix(ray.e, m));
  const auto [w0, w1] = critical_pair(ray.e);
  words.push_back(w0);
  words.push_back(w1);

  VerificationReport rep;
  rep.name = "zcycles";
  rep.inputs["theta"] = theta.str();
  rep.inputs["eps"] = detail::eps_csv(epsilons);
  rep.inputs["nu"] = std::to_string(nu);
  rep.inputs["samples"] = std::to_string(samples);

  double lambda_min = 1e300, ka_min = 1e300, ka_max = 0.0, kb_min = 1e300, kb_max = 0.0;
  int total_cycles = 0;
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    const auto [g, c] = ray_point_at_eps(cur, ray.c_hat, epsilons[ei]);
    const double eps_m = std::abs(c - ray.c_hat);
    auto batch =
        realize_batch(c, theta, words, depth, opt.realize_tol, opt.partition_g_min);

    double lam = 1e300, ka = 0.0, kb = 0.0;
    int cycles = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!batch.points[i]) continue;
      const auto dec = zcycle_decompose(c, *batch.points[i], nu, opt.horizon);
      const auto& orbit = batch.points[i]->orbit;
      for (const ZBlock& b : dec.blocks) {
        const int end = b.end < 0 ? opt.horizon : b.end;
        // sum_i 1/|Df^i(z_start)| over the block
        double sum = 0.0, logD = 0.0;
        for (int n = b.start; n < end; ++n) {
          logD += std::log(2.0 * std::abs(orbit[n]));
          sum += std::exp(-logD);
        }
        if (b.zcycle) {
          ka = std::max(ka, sum * std::sqrt(eps_m));
          if (b.end >= 0) {
            lam = std::min(lam, b.expansion);
            ++cycles;
          }
        } else {
          kb = std::max(kb, sum);
        }
      }
    }
    lambda_min = std::min(lambda_min, lam);
    ka_min = std::min(ka_min, ka);
    ka_max = std::max(ka_max, ka);
    kb_min = std::min(kb_min, kb);
    kb_max = std::max(kb_max, kb);
    total_cycles += cycles;
    rep.metrics["Lambda_hat_" + std::to_string(ei)] = lam;
    rep.metrics["K_A_hat_" + std::to_string(ei)] = ka;
    rep.metrics["K_B_hat_" + std::to_string(ei)] = kb;
    rep.metrics["eps_measured_" + std::to_string(ei)] = eps_m;
    rep.metrics["finite_cycles_" + std::to_string(ei)] = cycles;
  }
  rep.metrics["Lambda_hat_min"] = lambda_min;
  rep.metrics["K_A_spread"] = ka_max / ka_min;
  rep.metrics["K_B_spread"] = kb_max / kb_min;
  rep.metrics["finite_cycles_total"] = total_cycles;
  rep.tolerance_spec =
      "Lambda_hat > 1 on every finite Z-cycle; K_A_hat spread across eps < factor 3";
  rep.pass = total_cycles > 0 && lambda_min > 1.0 && ka_max / ka_min < 3.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Lemma T: dist(0, J(f_c)) against sqrt eps

inline VerificationReport dist_zero_julia(const ExactAngle& theta,
                                          const std::vector<double>& epsilons, int samples,
                                          const SuiteOptions& opt = {}) {
  const MisiurewiczRay ray = analyze_ray(theta);
  RayCursor cur(theta, true, Cplx(0, 0));
  std::vector<ItinerarySeq> words = sample_words(samples, opt.depth / 2, ray.e, opt.seed + 2);
  const auto [w0, w1] = critical_pair(ray.e);
  words.push_back(w0);
  words.push_back(w1);

  VerificationReport rep;
  rep.name = "lemma-t";
  rep.inputs["theta"] = theta.str();
  rep.inputs["eps"] = detail::eps_csv(epsilons);
  rep.inputs["samples"] = std::to_string(samples);

  double ratio_min = 1e300, ratio_max = 0.0;
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    const auto [g, c] = ray_point_at_eps(cur, ray.c_hat, epsilons[ei]);
    const double eps_m = std::abs(c - ray.c_hat);
    auto batch =
        realize_batch(c, theta, words, opt.depth, opt.realize_tol, opt.partition_g_min);
    double dmin = 1e300;
    for (const auto& p : batch.points)
      if (p) dmin = std::min(dmin, std::abs(p->position));
    const double ratio = dmin / std::sqrt(eps_m);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
    rep.metrics["d_hat_" + std::to_string(ei)] = dmin;
    rep.metrics["ratio_" + std::to_string(ei)] = ratio;
    rep.metrics["eps_measured_" + std::to_string(ei)] = eps_m;
  }
  rep.metrics["ratio_min"] = ratio_min;
  rep.metrics["ratio_spread"] = ratio_max / ratio_min;
  rep.tolerance_spec = "min|z| / sqrt(eps) bounded below away from 0 (spread < 1.5)";
  rep.pass = ratio_min > 0.05 && ratio_max / ratio_min < 1.5;
  return rep;
}

// ---------------------------------------------------------------------------
// Corollary 1.4: Hausdorff scaling

inline VerificationReport hausdorff_scaling(const ExactAngle& theta,
                                            const std::vector<double>& epsilons, int word_len,
                                            const SuiteOptions& opt = {}) {
  const MisiurewiczRay ray = analyze_ray(theta);
  RayCursor cur(theta, true, Cplx(0, 0));

  // all words of length word_len with a fixed tail, realized at both ends
  std::vector<ItinerarySeq> words;
  words.reserve(std::size_t(1) << word_len);
  const ItinerarySeq tail = ItinerarySeq::constant(Sym::s1);
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << word_len); ++m) {
    std::vector<Sym> prefix(word_len);
    for (int k = 0; k < word_len; ++k) prefix[k] = (m >> k) & 1 ? Sym::s1 : Sym::s0;
    words.push_back(word_with_tail(prefix, tail));
  }

  auto hat_batch = realize_batch(ray.c_hat, theta, words, opt.depth,
                                         opt.hat_realize_tol, opt.hat_partition_g_min);
  std::vector<Cplx> hat_cloud;
  for (const auto& p : hat_batch.points)
    if (p) hat_cloud.push_back(p->position);

  VerificationReport rep;
  rep.name = "hausdorff";
  rep.inputs["theta"] = theta.str();
  rep.inputs["eps"] = detail::eps_csv(epsilons);
  rep.inputs["word_len"] = std::to_string(word_len);

  std::vector<double> logs_eps, logs_dh;
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    const auto [g, c] = ray_point_at_eps(cur, ray.c_hat, epsilons[ei]);
    const double eps_m = std::abs(c - ray.c_hat);
    auto batch =
        realize_batch(c, theta, words, opt.depth, opt.realize_tol, opt.partition_g_min);
    std::vector<Cplx> cloud;
    double pair_max = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!batch.points[i]) continue;
      cloud.push_back(batch.points[i]->position);
      if (hat_batch.points[i])
        pair_max = std::max(pair_max,
                            std::abs(batch.points[i]->position - hat_batch.points[i]->position));
    }
    const double dh = hausdorff_distance(cloud, hat_cloud);
    logs_eps.push_back(std::log(eps_m));
    logs_dh.push_back(std::log(dh));
    rep.metrics["d_H_" + std::to_string(ei)] = dh;
    rep.metrics["pair_max_" + std::to_string(ei)] = pair_max;
    rep.metrics["eps_measured_" + std::to_string(ei)] = eps_m;
  }

  // least-squares slope of log d_H against log eps
  const std::size_t n = logs_eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += logs_eps[i];
    sy += logs_dh[i];
    sxx += logs_eps[i] * logs_eps[i];
    sxy += logs_eps[i] * logs_dh[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.metrics["slope"] = slope;
  rep.tolerance_spec = "log-log regression slope of d_H vs eps in [0.4, 0.6]";
  rep.pass = slope >= 0.4 && slope <= 0.6;
  return rep;
}

// ---------------------------------------------------------------------------
// Theorems 1.3 / 1.5 / 1.6: semiconjugacy and fiber structure

inline VerificationReport semiconjugacy_check(const ExactAngle& theta, int word_len,
                                              const SuiteOptions& opt = {}) {
  const MisiurewiczRay ray = analyze_ray(theta);
  const ItinerarySeq& e = ray.e;

  // all {0,1} words of word_len over the three tail families, deduplicated
  // on the exact sequences (different families can describe one sequence),
  // plus every sigma image so the conjugacy residual can be evaluated
  const ItinerarySeq tails[3] = {ItinerarySeq::constant(Sym::s0),
                                 ItinerarySeq::constant(Sym::s1), e};
  std::vector<ItinerarySeq> seqs;
  std::map<std::string, std::size_t> index;
  auto add = [&](const ItinerarySeq& s) -> std::size_t {
    const ItinerarySeq canon = normalized(s);
    const std::string key = canon.str();
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    seqs.push_back(canon);
    index.emplace(key, seqs.size() - 1);
    return seqs.size() - 1;
  };
  std::vector<std::size_t> base;  // indices of the level-word_len words
  for (int t = 0; t < 3; ++t) {
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << word_len); ++m) {
      std::vector<Sym> prefix(word_len);
      for (int k = 0; k < word_len; ++k) prefix[k] = (m >> k) & 1 ? Sym::s1 : Sym::s0;
      base.push_back(add(word_with_tail(prefix, tails[t])));
    }
  }
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  const std::size_t n_base_end = seqs.size();
  std::vector<std::size_t> sigma_of(n_base_end);
  for (std::size_t i = 0; i < n_base_end; ++i) sigma_of[i] = add(seqs[i].shifted());
  sigma_of.resize(seqs.size(), 0);
  for (std::size_t i = n_base_end; i < seqs.size(); ++i) sigma_of[i] = add(seqs[i].shifted());

  auto batch = realize_batch(ray.c_hat, theta, seqs, opt.depth, opt.hat_realize_tol,
                                     opt.hat_partition_g_min);

  VerificationReport rep;
  rep.name = "semiconjugacy";
  rep.inputs["theta"] = theta.str();
  rep.inputs["word_len"] = std::to_string(word_len);
  rep.inputs["c_hat_re"] = std::to_string(ray.c_hat.real());
  rep.inputs["c_hat_im"] = std::to_string(ray.c_hat.imag());

  // (a) conjugacy residual: f(h(s)) vs h(sigma s)
  double residual = 0.0;
  int missing = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const std::size_t j = sigma_of[i];
    if (!batch.points[i] || !batch.points[j]) {
      ++missing;
      continue;
    }
    const Cplx fh = batch.points[i]->position * batch.points[i]->position + ray.c_hat;
    residual = std::max(residual, std::abs(fh - batch.points[j]->position));
  }

  // (b) predicted fibers: the unique flip-partner when sigma^{k+1}(s) = e
  std::vector<std::optional<std::size_t>> partner(seqs.size());
  std::vector<int> hit_k(seqs.size(), -1);
  int ambiguous = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const FiberPartner fp = fiber_partner(e, seqs[i]);
    if (fp.ambiguous) ++ambiguous;
    if (!fp.partner) continue;
    const std::string key = normalized(*fp.partner).str();
    auto it = index.find(key);
    if (it != index.end()) {
      partner[i] = it->second;
      hit_k[i] = static_cast<int>(fp.k);
    }
  }

  // geometry: intra-fiber gaps vs everything else
  std::vector<Cplx> cloud;
  std::vector<std::size_t> cloud_idx;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (batch.points[i]) {
      cloud.push_back(batch.points[i]->position);
      cloud_idx.push_back(i);
    }
  }
  double pair_gap_max = 0.0;
  int predicted_pairs = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (!partner[i] || *partner[i] <= i) continue;
    if (!batch.points[i] || !batch.points[*partner[i]]) continue;
    ++predicted_pairs;
    pair_gap_max = std::max(
        pair_gap_max, std::abs(batch.points[i]->position - batch.points[*partner[i]]->position));
  }
  double cross_gap_min = 1e300;
  {
    std::vector<double> mins(cloud.size(), 1e300);
    parallel_for(cloud.size(), [&](std::size_t a) {
      const std::size_t ia = cloud_idx[a];
      for (std::size_t b = 0; b < cloud.size(); ++b) {
        if (b == a) continue;
        const std::size_t ib = cloud_idx[b];
        if (partner[ia] && *partner[ia] == ib) continue;
        const double d = std::abs(cloud[a] - cloud[b]);
        mins[a] = std::min(mins[a], d);
      }
    });
    for (double d : mins) cross_gap_min = std::min(cross_gap_min, d);
  }

  // (c) fiber size 2 exactly on words whose realized orbit passes the
  // critical point
  const double hit_snap = 1e-6;
  int size_mismatch = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (!batch.points[i]) continue;
    const auto& orbit = batch.points[i]->orbit;
    double omin = 1e300;
    const int lim = std::min<int>(word_len + 2, static_cast<int>(orbit.size()) - 1);
    for (int k = 0; k <= lim; ++k) omin = std::min(omin, std::abs(orbit[k]));
    const bool hits0 = omin < hit_snap;
    const bool size2 = partner[i].has_value() && hit_k[i] <= word_len + 1;
    if (hits0 != size2) ++size_mismatch;
  }

  rep.metrics["residual"] = residual;
  rep.metrics["sequences"] = static_cast<double>(seqs.size());
  rep.metrics["realized"] = static_cast<double>(cloud.size());
  rep.metrics["missing"] = missing;
  rep.metrics["predicted_pairs"] = predicted_pairs;
  rep.metrics["pair_gap_max"] = pair_gap_max;
  rep.metrics["cross_gap_min"] = cross_gap_min;
  rep.metrics["separation_factor"] = cross_gap_min / std::max(pair_gap_max, 1e-300);
  rep.metrics["ambiguous_words"] = ambiguous;
  rep.metrics["orbit_hit_mismatches"] = size_mismatch;
  rep.tolerance_spec =
      "conjugacy residual < 1e-8; fibers have size <= 2 (unique flip partner); "
      "collision pairs separate from everything else by > 10x; size-2 iff the "
      "orbit passes within 1e-6 of 0; zero mismatches";
  rep.pass = residual < 1e-8 && ambiguous == 0 && size_mismatch == 0 &&
             cross_gap_min > 10.0 * pair_gap_max && predicted_pairs > 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Prop 3.2 against the closed-form fixed point

inline VerificationReport derivative_formula_check(const std::vector<Cplx>& cs,
                                                   double tol = 1e-8) {
  VerificationReport rep;
  rep.name = "derivative-formula";
  rep.inputs["parameters"] = std::to_string(cs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Cplx c = cs[i];
    const Cplx beta = 0.5 * (1.0 + std::sqrt(Cplx(1.0) - 4.0 * c));
    const Cplx closed = -1.0 / (2.0 * beta - 1.0);
    const Cplx series = derivative_series(c, beta).value;
    const double rel = std::abs(series - closed) / std::abs(closed);
    rep.metrics["rel_err_" + std::to_string(i)] = rel;
    worst = std::max(worst, rel);
  }
  rep.metrics["rel_err_max"] = worst;
  rep.tolerance_spec = "relative error against -1/(2 beta - 1) below 1e-8";
  rep.pass = worst < tol;
  return rep;
}

}  // namespace rayflow
