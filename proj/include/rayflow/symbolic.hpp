#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "rayflow/angle.hpp"
#include "rayflow/itinerary.hpp"

namespace rayflow {

struct StarInKneading : std::logic_error {
  StarInKneading()
      : std::logic_error("kneading sequence of a non-recurrent angle contains *") {}
};

/// Symbol of a single angle x relative to the partition of the circle by
/// the boundary pair {theta/2, (theta+1)/2}. The open semicircle
/// containing theta maps to 0, the other one to 1, the pair itself to *.
inline Sym angle_symbol(const ExactAngle& theta, const ExactAngle& x) {
  const ExactAngle lo = theta.half();        // theta/2
  const ExactAngle hi = theta.half_plus();   // (theta+1)/2
  if (x == lo || x == hi) return Sym::star;
  // T0 = (theta/2, (theta+1)/2) as an interval of [0,1); theta sits inside.
  return (angle_less(lo, x) && angle_less(x, hi)) ? Sym::s0 : Sym::s1;
}

namespace detail {

// Canonical eventually-periodic form: minimal repeat, head absorbed into
// the rotation where possible. Makes str() output stable.
inline ItinerarySeq normalize(std::vector<Sym> head, std::vector<Sym> repeat) {
  const std::size_t n = repeat.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = (repeat[i] == repeat[i % d]);
    if (ok) {
      repeat.resize(d);
      break;
    }
  }
  while (!head.empty() && head.back() == repeat.back()) {
    head.pop_back();
    repeat.insert(repeat.begin(), repeat.back());
    repeat.pop_back();
  }
  return ItinerarySeq(std::move(head), std::move(repeat));
}

}  // namespace detail

/// Itinerary of t under angle doubling with respect to theta. Rational
/// angles have an exactly eventually-periodic orbit, so the result always
/// carries an exact tail; depth is only a sanity cap on the work done.
inline ItinerarySeq angle_itinerary(const ExactAngle& theta, const ExactAngle& t,
                                    std::size_t depth = 256) {
  if (theta.is_zero()) throw std::invalid_argument("angle_itinerary: theta must be nonzero");
  const AngleClassification cls = classify_angle(t);
  const std::size_t pre = static_cast<std::size_t>(cls.preperiod);
  const std::size_t per = static_cast<std::size_t>(cls.period);
  if (pre + per > depth + per)
    throw std::invalid_argument("angle_itinerary: orbit longer than depth cap");
  std::vector<Sym> head, repeat;
  ExactAngle x = t;
  for (std::size_t n = 0; n < pre; ++n, x = x.doubled()) head.push_back(angle_symbol(theta, x));
  for (std::size_t n = 0; n < per; ++n, x = x.doubled()) repeat.push_back(angle_symbol(theta, x));
  return detail::normalize(std::move(head), std::move(repeat));
}

/// Kneading sequence of theta. For a non-recurrent theta a * is
/// impossible in exact arithmetic; seeing one signals a bug.
inline ItinerarySeq kneading(const ExactAngle& theta, std::size_t depth = 256) {
  ItinerarySeq e = angle_itinerary(theta, theta, depth);
  if (!classify_angle(theta).recurrent) {
    if (e.contains_star(e.head().size() + e.repeat()->size())) throw StarInKneading();
  }
  return e;
}

inline ItinerarySeq shift(const ItinerarySeq& s) { return s.shifted(); }

/// Canonical eventually-periodic form: minimal repeat block, trailing
/// head symbols absorbed into the rotation. Equal sequences canonicalize
/// to identical representations (useful as map keys).
inline ItinerarySeq normalized(const ItinerarySeq& s) {
  if (!s.infinite()) return s;
  return detail::normalize(s.head(), *s.repeat());
}

namespace detail {

inline void require_aperiodic(const ItinerarySeq& e) {
  if (e.periodic_under_shift()) throw PeriodicE();
}

// Comparison horizon that decides equality of two eventually-periodic
// sequences, or the declared truncation depth when a tail is absent.
inline std::size_t compare_horizon(const ItinerarySeq& a, const ItinerarySeq& b,
                                   std::size_t depth) {
  if (a.infinite() && b.infinite()) {
    return std::max(a.head().size(), b.head().size()) +
           std::lcm(a.repeat()->size(), b.repeat()->size());
  }
  std::size_t lim = depth;
  if (!a.infinite()) lim = std::min(lim, a.truncation_depth());
  if (!b.infinite()) lim = std::min(lim, b.truncation_depth());
  return lim;
}

inline bool seq_equal(const ItinerarySeq& a, const ItinerarySeq& b, std::size_t depth) {
  if (a.infinite() && b.infinite()) return a.exact_equal(b);
  return a.agrees_to(b, compare_horizon(a, b, depth));
}

}  // namespace detail

/// a ~_e s: either a = s, or there is k >= 0 with a_n = s_n for all
/// n != k and sigma^{k+1}(a) = sigma^{k+1}(s) = e. Requires aperiodic e.
inline bool equivalent_wrt(const ItinerarySeq& e, const ItinerarySeq& a,
                           const ItinerarySeq& s, std::size_t depth = 256) {
  detail::require_aperiodic(e);
  const std::size_t lim = detail::compare_horizon(a, s, depth);
  std::optional<std::size_t> k;
  for (std::size_t n = 0; n < lim; ++n) {
    if (a.at(n) == s.at(n)) continue;
    if (k) return false;  // two mismatches
    k = n;
  }
  if (!k) return true;  // reflexivity
  const ItinerarySeq ta = a.shifted(*k + 1);
  const ItinerarySeq ts = s.shifted(*k + 1);
  return detail::seq_equal(ta, ts, depth) && detail::seq_equal(ta, e, depth);
}

/// Result of the fiber query. `ambiguous` marks combinatorial input that
/// admits several valid flip positions; genuine itineraries of points
/// never do, so such input is not realizable and the minimal k is used.
struct FiberPartner {
  std::optional<ItinerarySeq> partner;
  std::size_t k = 0;
  bool ambiguous = false;
};

/// The unique ~_e partner of s: if sigma^{k+1}(s) = e for some k, the
/// partner is s with symbol k flipped; otherwise there is none.
inline FiberPartner fiber_partner(const ItinerarySeq& e, const ItinerarySeq& s,
                                  std::size_t depth = 256) {
  detail::require_aperiodic(e);
  FiberPartner out;
  // Past head+repeat the shifts of s cycle; a match there would force e
  // to be periodic, contradicting the precondition. So the scan is finite.
  const std::size_t bound =
      s.infinite() ? s.head().size() + s.repeat()->size() : s.truncation_depth();
  for (std::size_t k = 0; k + 1 <= bound; ++k) {
    if (!detail::seq_equal(s.shifted(k + 1), e, depth)) continue;
    if (!out.partner) {
      out.k = k;
      out.partner = s.with_symbol(k, sym_flip(s.at(k)));
    } else {
      out.ambiguous = true;
      break;
    }
  }
  return out;
}

}  // namespace rayflow
