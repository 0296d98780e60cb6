#include "qg/diophantine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qg/errors.hpp"

namespace qg {

namespace {

constexpr std::int64_t kQuotientCap = 1'000'000'000'000LL;  // 1e12

void require_depth(int depth) {
  if (depth < 1 || depth > 1000)
    throw std::invalid_argument("expansion depth must be in [1, 1000]");
}

bool mul_add_overflows(std::int64_t a, std::int64_t b, std::int64_t c,
                       std::int64_t* out) {
  std::int64_t t;
  if (__builtin_mul_overflow(a, b, &t)) return true;
  if (__builtin_add_overflow(t, c, out)) return true;
  return false;
}

}  // namespace

ContinuedFraction cf_expand(Dd x, int depth) {
  require_depth(depth);
  if (!(x > Dd(0.0))) throw std::invalid_argument("x must be positive");

  ContinuedFraction cf;
  Dd a0 = dd_floor(x);
  cf.a0 = static_cast<std::int64_t>(to_double(a0));
  Dd frac = x - a0;

  while (static_cast<int>(cf.quotients.size()) < depth) {
    if (frac == Dd(0.0)) {
      cf.exact = true;
      break;
    }
    const Dd inv = Dd(1.0) / frac;
    const Dd af = dd_floor(inv);
    const double a = to_double(af);
    if (!(a >= 1.0) || a > static_cast<double>(kQuotientCap)) {
      // Remainder below working precision: stop, flagged inexact.
      break;
    }
    frac = inv - af;
    if (frac > Dd(1.0) - Dd(1e-18)) {
      // The inverse rounded to just under an integer; the remainder is not
      // certifiable, so round the quotient up and stop.
      cf.quotients.push_back(static_cast<std::int64_t>(a) + 1);
      break;
    }
    cf.quotients.push_back(static_cast<std::int64_t>(a));
  }
  return cf;
}

ContinuedFraction cf_expand(double x, int depth) { return cf_expand(Dd(x), depth); }

ContinuedFraction cf_from_ratio(std::int64_t p, std::int64_t q, int depth) {
  require_depth(depth);
  if (p <= 0 || q <= 0) throw std::invalid_argument("ratio must be positive");
  ContinuedFraction cf;
  cf.a0 = p / q;
  std::int64_t r = p % q;
  p = q;
  q = r;
  while (q != 0 && static_cast<int>(cf.quotients.size()) < depth) {
    cf.quotients.push_back(p / q);
    r = p % q;
    p = q;
    q = r;
  }
  cf.exact = (q == 0);
  return cf;
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, int count) {
  const int available = 1 + static_cast<int>(cf.quotients.size());
  if (count < 1 || count > available)
    throw std::invalid_argument("requested more convergents than available");

  std::vector<Convergent> out;
  out.reserve(count);
  std::int64_t pm1 = 1, qm1 = 0;        // p_{-1}, q_{-1}
  std::int64_t p0 = cf.a0, q0 = 1;      // p_0, q_0
  out.push_back({p0, q0});
  for (int i = 1; i < count; ++i) {
    const std::int64_t a = cf.quotients[i - 1];
    std::int64_t p, q;
    if (mul_add_overflows(a, p0, pm1, &p) || mul_add_overflows(a, q0, qm1, &q))
      throw numerical_error("convergent overflow");
    pm1 = p0;
    qm1 = q0;
    p0 = p;
    q0 = q;
    out.push_back({p0, q0});
  }
  return out;
}

double dist_to_nearest_int(Dd x) {
  const Dd f = x - dd_floor(x);
  const Dd d = f < Dd(0.5) ? f : Dd(1.0) - f;
  return to_double(d);
}

ApproxQuality approx_quality(Dd theta, int depth) {
  if (depth < 2) throw std::invalid_argument("depth must be at least 2");
  ApproxQuality out;
  ContinuedFraction cf = cf_expand(theta, depth);
  out.rational = cf.exact;

  // Convergents until int64 overflow would occur.
  int want = 1 + static_cast<int>(cf.quotients.size());
  while (want > 1) {
    try {
      out.convs = convergents(cf, want);
      break;
    } catch (const numerical_error&) {
      --want;
    }
  }
  if (out.convs.empty()) out.convs = convergents(cf, 1);

  out.min_quality = std::numeric_limits<double>::infinity();
  for (const auto& c : out.convs) {
    const Dd qtheta = dd_from_int(c.q) * theta;
    const double quality = static_cast<double>(c.q) * dist_to_nearest_int(qtheta);
    out.qualities.push_back(quality);
    out.min_quality = std::min(out.min_quality, quality);
  }
  if (out.rational) out.min_quality = 0.0;
  return out;
}

HurwitzSequence hurwitz_sequence(Dd theta, int count) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  ContinuedFraction cf = cf_expand(theta, 200);
  if (cf.exact) throw std::domain_error("theta is rational to working precision");

  HurwitzSequence out;
  const Dd bound = (Dd(1.0) + Dd(1e-6)) / dd_sqrt(Dd(5.0));

  std::int64_t pm1 = 1, qm1 = 0;
  std::int64_t p = cf.a0, q = 1;
  int index = 0;
  while (true) {
    if (index % 2 == 0) {
      // Even-length truncation: approaches theta from below.
      const Dd err = dd_from_int(q) * theta - dd_from_int(p);
      if (err > Dd(0.0)) {
        const Dd scaled = dd_from_int(q) * err;
        if (scaled < bound) {
          out.members.push_back({p, q});
          if (static_cast<int>(out.members.size()) == count) return out;
        }
      }
    }
    if (index >= static_cast<int>(cf.quotients.size())) break;
    const std::int64_t a = cf.quotients[index];
    std::int64_t pn, qn;
    if (mul_add_overflows(a, p, pm1, &pn) || mul_add_overflows(a, q, qm1, &qn))
      break;
    pm1 = p;
    qm1 = q;
    p = pn;
    q = qn;
    ++index;
  }
  out.complete = false;
  return out;
}

}  // namespace qg
