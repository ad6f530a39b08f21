#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rayflow {

/// Rational angle t = num/den on the circle R/Z, kept reduced with
/// 0 <= num < den. Doubling stays in exact integer arithmetic so the
/// symbolic layer never sees floating point.
struct ExactAngle {
  std::int64_t num = 0;
  std::int64_t den = 1;

  ExactAngle() = default;
  ExactAngle(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw std::invalid_argument("ExactAngle: denominator must be positive");
    n %= d;
    if (n < 0) n += d;
    const std::int64_t g = std::gcd(n, d);
    num = n / g;
    den = d / g;
  }

  bool operator==(const ExactAngle& o) const { return num == o.num && den == o.den; }
  bool operator!=(const ExactAngle& o) const { return !(*this == o); }

  bool is_zero() const { return num == 0; }

  /// 2t mod 1.
  ExactAngle doubled() const { return ExactAngle((2 * num) % den, den); }

  /// t/2 (the preimage in [0, 1/2)).
  ExactAngle half() const { return ExactAngle(num, 2 * den); }

  /// (t+1)/2 (the preimage in [1/2, 1)).
  ExactAngle half_plus() const { return ExactAngle(num + den, 2 * den); }

  /// 1 - t mod 1 (complex conjugation of the ray).
  ExactAngle conjugate() const { return ExactAngle(den - num, den); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Exact comparison a < b as fractions in [0,1).
inline bool angle_less(const ExactAngle& a, const ExactAngle& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

/// Parses "p/q" (or a bare integer "p", meaning p/1 reduced mod 1).
/// Decimals and trailing junk are rejected: angles stay exact.
inline ExactAngle parse_angle(const std::string& s) {
  auto integer = [&](const std::string& part) {
    std::size_t used = 0;
    std::int64_t v;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad angle: " + s);
    }
    if (used != part.size() || part.empty()) throw std::invalid_argument("bad angle: " + s);
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return ExactAngle(integer(s), 1);
  return ExactAngle(integer(s.substr(0, slash)), integer(s.substr(slash + 1)));
}

/// Exact (pre)period of t under angle doubling. The doubling orbit of
/// num/2^a*m (m odd) reaches denominator m after exactly a steps and is
/// purely periodic from there with period ord_m(2).
struct AngleClassification {
  int preperiod = 0;
  int period = 1;
  bool recurrent = false;  // t lies on its own doubling cycle
};

inline AngleClassification classify_angle(const ExactAngle& t) {
  AngleClassification out;
  std::int64_t m = t.den;
  while (m % 2 == 0) {
    m /= 2;
    ++out.preperiod;
  }
  if (m == 1) {
    out.period = 1;  // orbit ends on the fixed angle 0
  } else {
    std::int64_t pow = 2 % m;
    int k = 1;
    while (pow != 1) {
      pow = (2 * pow) % m;
      ++k;
    }
    out.period = k;
  }
  out.recurrent = (out.preperiod == 0);
  return out;
}

}  // namespace rayflow
