#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qg {

// ---------------------------------------------------------------------------
// Double-double arithmetic: an unevaluated sum hi + lo of two doubles giving
// roughly 31 significant decimal digits.  Continued-fraction expansion of a
// quadratic surd loses about q_n^2 in relative precision by depth n, so plain
// doubles run out near depth 18 while this comfortably certifies depth 60.
// Standard error-free transformations (Dekker / Bailey); products use fma.
// ---------------------------------------------------------------------------

struct Dd {
  double hi = 0.0;
  double lo = 0.0;

  Dd() = default;
  explicit Dd(double x) : hi(x), lo(0.0) {}
  Dd(double h, double l) : hi(h), lo(l) {}
};

namespace dd_detail {

inline Dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline Dd operator+(Dd a, Dd b) {
  using namespace dd_detail;
  Dd s = two_sum(a.hi, b.hi);
  Dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Dd operator-(Dd a) { return {-a.hi, -a.lo}; }
inline Dd operator-(Dd a, Dd b) { return a + (-b); }

inline Dd operator*(Dd a, Dd b) {
  using namespace dd_detail;
  Dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline Dd operator/(Dd a, Dd b) {
  const double q1 = a.hi / b.hi;
  Dd r = a - Dd(q1) * b;
  const double q2 = r.hi / b.hi;
  r = r - Dd(q2) * b;
  const double q3 = r.hi / b.hi;
  Dd q = dd_detail::quick_two_sum(q1, q2);
  q.lo += q3;
  return dd_detail::quick_two_sum(q.hi, q.lo);
}

inline int dd_cmp(Dd a, Dd b) {
  const Dd d = a - b;
  if (d.hi > 0.0 || (d.hi == 0.0 && d.lo > 0.0)) return 1;
  if (d.hi < 0.0 || (d.hi == 0.0 && d.lo < 0.0)) return -1;
  return 0;
}

inline bool operator<(Dd a, Dd b) { return dd_cmp(a, b) < 0; }
inline bool operator>(Dd a, Dd b) { return dd_cmp(a, b) > 0; }
inline bool operator<=(Dd a, Dd b) { return dd_cmp(a, b) <= 0; }
inline bool operator>=(Dd a, Dd b) { return dd_cmp(a, b) >= 0; }
inline bool operator==(Dd a, Dd b) { return dd_cmp(a, b) == 0; }

inline double to_double(Dd a) { return a.hi + a.lo; }

inline Dd dd_from_int(std::int64_t n) {
  // Exact split: n = (n >> 32) * 2^32 + (n & 0xffffffff), both parts exact.
  const double high = static_cast<double>(n >> 32) * 4294967296.0;
  const double low = static_cast<double>(n & 0xffffffffLL);
  return dd_detail::two_sum(high, low);
}

inline Dd dd_floor(Dd a) {
  const double fh = std::floor(a.hi);
  if (fh != a.hi) return Dd(fh);
  return dd_detail::quick_two_sum(fh, std::floor(a.lo));
}

inline Dd dd_sqrt(Dd a) {
  if (a.hi < 0.0) throw std::domain_error("dd_sqrt of negative value");
  if (a.hi == 0.0) return Dd(0.0);
  // One Newton step on 1/sqrt doubles the working precision (Karp's trick).
  const double x = 1.0 / std::sqrt(a.hi);
  const double y = a.hi * x;
  const Dd y2 = dd_detail::two_prod(y, y);
  const double corr = (a - y2).hi * (x * 0.5);
  return dd_detail::quick_two_sum(y, corr);
}

inline Dd dd_abs(Dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

/// Parse a plain decimal literal ("12", "0.75", "1.618e-3") into a Dd.
inline Dd dd_parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  Dd value(0.0);
  int frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  const Dd ten(10.0);
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      value = value * ten + Dd(static_cast<double>(c - '0'));
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      int expo = 0;
      bool eneg = false;
      ++i;
      if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        eneg = text[i] == '-';
        ++i;
      }
      if (i >= text.size()) throw std::invalid_argument("malformed exponent");
      for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
          throw std::invalid_argument("malformed exponent");
        expo = expo * 10 + (text[i] - '0');
        if (expo > 400) throw std::invalid_argument("exponent out of range");
      }
      frac_digits += eneg ? expo : -expo;
      break;
    } else {
      throw std::invalid_argument("malformed decimal literal");
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal literal");
  Dd scale(1.0);
  for (int d = 0; d < std::abs(frac_digits); ++d) scale = scale * ten;
  if (frac_digits > 0)
    value = value / scale;
  else if (frac_digits < 0)
    value = value * scale;
  return neg ? -value : value;
}

inline Dd dd_golden_mean() { return (Dd(1.0) + dd_sqrt(Dd(5.0))) / Dd(2.0); }

}  // namespace qg
