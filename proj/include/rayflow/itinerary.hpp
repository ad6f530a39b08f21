#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rayflow {

/// Symbol of the three-letter shift space: 0, 1, or * (on the partition
/// boundary / at the critical point).
enum class Sym : unsigned char { s0 = 0, s1 = 1, star = 2 };

inline char sym_char(Sym s) { return s == Sym::s0 ? '0' : (s == Sym::s1 ? '1' : '*'); }

inline Sym sym_flip(Sym s) {
  if (s == Sym::star) throw std::invalid_argument("cannot flip *");
  return s == Sym::s0 ? Sym::s1 : Sym::s0;
}

struct PeriodicE : std::runtime_error {
  PeriodicE() : std::runtime_error("reference sequence e is periodic") {}
};

/// A {0,1,*} sequence, either a finite truncation (no tail) or an exact
/// eventually-periodic sequence head . repeat^inf.
class ItinerarySeq {
 public:
  ItinerarySeq() = default;
  explicit ItinerarySeq(std::vector<Sym> head) : head_(std::move(head)) {}
  ItinerarySeq(std::vector<Sym> head, std::vector<Sym> repeat)
      : head_(std::move(head)), repeat_(std::move(repeat)) {
    if (repeat_ && repeat_->empty()) throw std::invalid_argument("empty repeat block");
  }

  static ItinerarySeq constant(Sym s) { return ItinerarySeq({}, {s}); }

  bool infinite() const { return repeat_.has_value(); }
  const std::vector<Sym>& head() const { return head_; }
  const std::vector<Sym>* repeat() const { return repeat_ ? &*repeat_ : nullptr; }

  /// Number of explicitly defined symbols for a finite sequence.
  std::size_t truncation_depth() const { return head_.size(); }

  bool empty() const { return head_.empty() && !repeat_; }

  Sym at(std::size_t n) const {
    if (n < head_.size()) return head_[n];
    if (!repeat_) throw std::out_of_range("finite itinerary: index past truncation depth");
    return (*repeat_)[(n - head_.size()) % repeat_->size()];
  }

  bool contains_star(std::size_t depth) const {
    const std::size_t lim = infinite() ? std::min(depth, head_.size() + repeat_->size()) : std::min(depth, head_.size());
    for (std::size_t n = 0; n < lim; ++n)
      if (at(n) == Sym::star) return true;
    return false;
  }

  /// Left shift, preserving the tail representation.
  ItinerarySeq shifted() const {
    if (empty()) throw std::invalid_argument("shift of empty sequence");
    if (!head_.empty()) {
      std::vector<Sym> h(head_.begin() + 1, head_.end());
      return repeat_ ? ItinerarySeq(std::move(h), *repeat_) : ItinerarySeq(std::move(h));
    }
    std::vector<Sym> r = *repeat_;
    Sym front = r.front();
    r.erase(r.begin());
    r.push_back(front);
    return ItinerarySeq({}, std::move(r));
  }

  ItinerarySeq shifted(std::size_t k) const {
    ItinerarySeq s = *this;
    for (std::size_t i = 0; i < k; ++i) s = s.shifted();
    return s;
  }

  /// New sequence s0 . this.
  ItinerarySeq prepended(Sym s) const {
    std::vector<Sym> h;
    h.reserve(head_.size() + 1);
    h.push_back(s);
    h.insert(h.end(), head_.begin(), head_.end());
    return repeat_ ? ItinerarySeq(std::move(h), *repeat_) : ItinerarySeq(std::move(h));
  }

  ItinerarySeq with_symbol(std::size_t k, Sym s) const {
    ItinerarySeq out = *this;
    if (k < out.head_.size()) {
      out.head_[k] = s;
      return out;
    }
    if (!out.repeat_) throw std::out_of_range("index past truncation depth");
    // materialize the head up to k before editing
    while (out.head_.size() <= k) {
      out.head_.push_back(out.at(out.head_.size()));
      std::vector<Sym> r = *out.repeat_;
      Sym front = r.front();
      r.erase(r.begin());
      r.push_back(front);
      out.repeat_ = std::move(r);
    }
    out.head_[k] = s;
    return out;
  }

  /// Symbols [0, depth) agree. Finite operands must be defined that far.
  bool agrees_to(const ItinerarySeq& o, std::size_t depth) const {
    for (std::size_t n = 0; n < depth; ++n)
      if (at(n) != o.at(n)) return false;
    return true;
  }

  /// Exact equality of two eventually-periodic sequences: both are
  /// lcm-periodic past the longer head, so a bounded compare decides.
  bool exact_equal(const ItinerarySeq& o) const {
    if (!infinite() || !o.infinite()) {
      if (infinite() != o.infinite()) return false;
      return head_ == o.head_;
    }
    const std::size_t H = std::max(head_.size(), o.head_.size());
    const std::size_t P = std::lcm(repeat_->size(), o.repeat_->size());
    return agrees_to(o, H + P);
  }

  bool operator==(const ItinerarySeq& o) const { return exact_equal(o); }
  bool operator!=(const ItinerarySeq& o) const { return !exact_equal(o); }

  /// True iff sigma^n(seq) == seq for some n >= 1; decidable on the
  /// eventually-periodic representation by bounded comparison.
  bool periodic_under_shift() const {
    if (!infinite()) throw std::invalid_argument("aperiodicity undecidable on a finite truncation");
    const std::size_t bound = head_.size() + repeat_->size();
    ItinerarySeq s = shifted();
    for (std::size_t n = 1; n <= bound; ++n, s = s.shifted())
      if (s.exact_equal(*this)) return true;
    return false;
  }

  /// "head(repeat)" notation, e.g. "0(01)"; a finite truncation prints bare symbols.
  std::string str() const {
    std::string out;
    for (Sym s : head_) out.push_back(sym_char(s));
    if (repeat_) {
      out.push_back('(');
      for (Sym s : *repeat_) out.push_back(sym_char(s));
      out.push_back(')');
    }
    return out;
  }

 private:
  std::vector<Sym> head_;
  std::optional<std::vector<Sym>> repeat_;
};

inline Sym parse_sym(char ch) {
  switch (ch) {
    case '0': return Sym::s0;
    case '1': return Sym::s1;
    case '*': return Sym::star;
    default: throw std::invalid_argument(std::string("bad itinerary symbol: ") + ch);
  }
}

/// Parses the str() notation back (lossless round trip).
inline ItinerarySeq parse_itinerary(const std::string& text) {
  std::vector<Sym> head, repeat;
  bool in_repeat = false, closed = false;
  for (char ch : text) {
    if (ch == '(') {
      if (in_repeat || closed) throw std::invalid_argument("bad itinerary: " + text);
      in_repeat = true;
    } else if (ch == ')') {
      if (!in_repeat) throw std::invalid_argument("bad itinerary: " + text);
      in_repeat = false;
      closed = true;
    } else if (closed) {
      throw std::invalid_argument("bad itinerary: " + text);
    } else {
      (in_repeat ? repeat : head).push_back(parse_sym(ch));
    }
  }
  if (in_repeat) throw std::invalid_argument("bad itinerary: " + text);
  if (closed) return ItinerarySeq(std::move(head), std::move(repeat));
  return ItinerarySeq(std::move(head));
}

}  // namespace rayflow
