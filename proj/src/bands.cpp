#include "qg/bands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "qg/errors.hpp"

namespace qg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_param(const char* fam, const char* name, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%s=%.12g", fam, name, v);
  return buf;
}

// Reduced angle s = x mod pi in [0, pi).
double reduce_mod_pi(double x) {
  double s = std::fmod(x, kPi);
  if (s < 0.0) s += kPi;
  if (s >= kPi) s -= kPi;
  return s;
}

double sing_tol(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

// ---------------------------------------------------------------------------
// Elementary intervals: the k axis partitioned by the merged singularity set
// { m pi / ell_j }.  On each interval the box extrema of the band conditions
// are monotone (or convex, for the repulsive-side DeltaPrimeS case), so every
// band edge is an isolated bisection root.
// ---------------------------------------------------------------------------

struct Boundary {
  double k;
  std::vector<int> sing;  // indices into ells singular here; empty = plain cut
};

std::vector<Boundary> build_boundaries(const std::vector<double>& ells, double k_max) {
  struct Ev {
    double k;
    int j;
  };
  std::vector<Ev> evs;
  for (int j = 0; j < static_cast<int>(ells.size()); ++j) {
    const double step = kPi / ells[j];
    for (long long m = 1;; ++m) {
      const double k = step * static_cast<double>(m);
      if (k > k_max * (1.0 + 1e-13)) break;
      evs.push_back({k, j});
    }
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) { return a.k < b.k; });

  std::vector<Boundary> out;
  for (const auto& ev : evs) {
    if (!out.empty() && ev.k - out.back().k <= 1e-9 * std::max(1.0, ev.k)) {
      out.back().sing.push_back(ev.j);
      out.back().k = std::min(out.back().k, ev.k);
    } else {
      out.push_back({ev.k, {ev.j}});
    }
  }
  if (out.empty() || k_max - out.back().k > 1e-12 * std::max(1.0, k_max))
    out.push_back({k_max, {}});
  else
    out.back().k = std::min(out.back().k, k_max);
  return out;
}

bool is_sing(const std::vector<int>& sing, int j) {
  return std::find(sing.begin(), sing.end(), j) != sing.end();
}

// Generic bisection for a function with exactly one sign change on (lo, hi).
// rising: f goes - to +.  Endpoint values are known by construction and never
// evaluated.
template <class F>
double bisect_root(F&& f, double lo, double hi, bool rising) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) return mid;
    const double v = f(mid);
    if ((v > 0.0) == rising)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Expand hi by doubling until pred(hi) holds (used to bracket the negative-
// energy roots; the functions involved are unbounded, so this terminates).
template <class F>
double expand_until(F&& pred, double hi) {
  for (int it = 0; it < 200 && !pred(hi); ++it) hi *= 2.0;
  return hi;
}

// -- positive-energy building blocks over a set of spacings ------------------

double tan_half(double s) { return std::tan(0.5 * s); }
double cot_half(double s) { return 1.0 / std::tan(0.5 * s); }

// 2k * F_plus(k), strictly increasing between singularities.
double two_k_fplus(double k, const std::vector<double>& ells) {
  double sum = 0.0;
  for (double l : ells) sum += tan_half(reduce_mod_pi(k * l));
  return 2.0 * k * sum;
}

double two_k_fplus_limit(double k, const std::vector<double>& ells,
                         const std::vector<int>& sing) {
  if (k == 0.0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j < static_cast<int>(ells.size()); ++j)
    if (!is_sing(sing, j)) sum += tan_half(reduce_mod_pi(k * ells[j]));
  return 2.0 * k * sum;
}

// -2k * F_minus(k) = sum_j 2k cot(s_j/2), strictly decreasing between
// singularities.
double two_k_fminus_neg(double k, const std::vector<double>& ells) {
  double sum = 0.0;
  for (double l : ells) sum += cot_half(reduce_mod_pi(k * l));
  return 2.0 * k * sum;
}

double two_k_fminus_neg_left_limit(double k, const std::vector<double>& ells,
                                   const std::vector<int>& sing) {
  // Limit from the left at a singular point: the singular cotangent term -> 0.
  double sum = 0.0;
  for (int j = 0; j < static_cast<int>(ells.size()); ++j)
    if (!is_sing(sing, j)) sum += cot_half(reduce_mod_pi(k * ells[j]));
  return 2.0 * k * sum;
}

// -- spectral assembly --------------------------------------------------------

struct BandPieces {
  std::vector<std::pair<double, double>> e;  // ascending energy intervals
  void add(double lo, double hi) {
    if (hi > lo) e.emplace_back(lo, hi);
  }
};

Spectrum assemble(BandPieces pieces, double e_max, SpectrumMeta meta) {
  std::sort(pieces.e.begin(), pieces.e.end());
  std::vector<std::pair<double, double>> merged;
  for (auto& p : pieces.e) {
    p.second = std::min(p.second, e_max);
    if (p.second <= p.first) continue;
    if (!merged.empty() &&
        p.first <= merged.back().second +
                       1e-11 * std::max(1.0, std::abs(merged.back().second)))
      merged.back().second = std::max(merged.back().second, p.second);
    else
      merged.push_back(p);
  }

  Spectrum s;
  s.e_max = e_max;
  s.meta = std::move(meta);
  s.meta.e_max = e_max;
  if (merged.empty()) {
    s.intervals.push_back({0.0, e_max, IntervalKind::gap});
    return s;
  }
  if (merged.front().first > 0.0)
    s.intervals.push_back({0.0, merged.front().first, IntervalKind::gap});
  for (std::size_t i = 0; i < merged.size(); ++i) {
    s.intervals.push_back({merged[i].first, merged[i].second, IntervalKind::band});
    if (i + 1 < merged.size())
      s.intervals.push_back(
          {merged[i].second, merged[i + 1].first, IntervalKind::gap});
  }
  if (merged.back().second < e_max - 1e-11 * std::max(1.0, e_max))
    s.intervals.push_back({merged.back().second, e_max, IntervalKind::gap});
  return s;
}

// -- delta lattice ------------------------------------------------------------

// Negative branch, c < 0.  Band at -kappa^2 iff
//   -2k sum coth <= c <= -2k sum tanh;
// both sides strictly decrease, so the band is a single interval.
struct NegativePiece {
  double lo_e;
  double hi_e;
};

std::optional<NegativePiece> delta_negative_band(double c,
                                                 const std::vector<double>& ells) {
  if (c >= 0.0) return std::nullopt;
  const auto A = [&](double kappa) {
    double sum = 0.0;
    for (double l : ells) sum += std::tanh(0.5 * kappa * l);
    return -2.0 * kappa * sum;
  };
  const auto B = [&](double kappa) {
    double sum = 0.0;
    for (double l : ells) sum += 1.0 / std::tanh(0.5 * kappa * l);
    return -2.0 * kappa * sum;
  };
  double inv_sum = 0.0;
  for (double l : ells) inv_sum += 1.0 / l;
  const double b0 = -4.0 * inv_sum;

  double hi = std::abs(c) / 2.0 + inv_sum + 1.0;
  hi = expand_until([&](double x) { return A(x) < c; }, hi);
  const double kappa_a =
      bisect_root([&](double x) { return A(x) - c; }, 1e-12, hi, false);

  if (c >= b0) return NegativePiece{-kappa_a * kappa_a, 0.0};

  double hib = expand_until([&](double x) { return B(x) < c; }, 1.0);
  const double kappa_b =
      bisect_root([&](double x) { return B(x) - c; }, 1e-12, hib, false);
  return NegativePiece{-kappa_a * kappa_a, -kappa_b * kappa_b};
}

// Positive branch walker shared by the 2D lattice and the Kronig-Penney
// specialization.  Emits band intervals in k.
std::vector<std::pair<double, double>> delta_positive_bands(
    double c, const std::vector<double>& ells, double k_max) {
  std::vector<std::pair<double, double>> bands;
  const auto boundaries = build_boundaries(ells, k_max);

  double g0 = 0.0;
  for (double l : ells) g0 += 4.0 / l;

  double a = 0.0;
  std::vector<int> a_sing;
  for (const auto& b : boundaries) {
    const bool cut = b.sing.empty();  // plain interval end at k_max
    if (b.k - a <= 1e-13 * std::max(1.0, b.k)) {
      a = b.k;
      a_sing = b.sing;
      continue;
    }
    if (c > 0.0) {
      // Gap iff c > 2k F_plus(k); the function rises to +inf, so the gap is
      // attached to the left endpoint and ends at a single root.
      const double t_left = two_k_fplus_limit(a, ells, a_sing);
      if (t_left >= c) {
        bands.emplace_back(a, b.k);
      } else if (cut && two_k_fplus(b.k, ells) <= c) {
        // whole remaining interval is gap
      } else {
        const double ks = bisect_root(
            [&](double k) { return two_k_fplus(k, ells) - c; }, a, b.k, true);
        bands.emplace_back(ks, b.k);
      }
    } else {
      // c < 0: gap iff |c| > sum_j 2k cot(s_j/2), which falls from +inf, so
      // the gap is attached to the right endpoint.
      const double target = -c;
      const double g_left = (a == 0.0) ? g0 : kInf;
      const double g_right = cut ? two_k_fminus_neg(b.k, ells)
                                 : two_k_fminus_neg_left_limit(b.k, ells, b.sing);
      if (g_left <= target) {
        // entire interval is gap (only possible on the first interval)
      } else if (g_right >= target) {
        bands.emplace_back(a, b.k);
      } else {
        const double ks = bisect_root(
            [&](double k) { return two_k_fminus_neg(k, ells) - target; }, a, b.k,
            false);
        bands.emplace_back(a, ks);
      }
    }
    a = b.k;
    a_sing = b.sing;
  }
  return bands;
}

Spectrum delta_like_spectrum(const std::vector<double>& ells, double c,
                             double e_max, SpectrumMeta meta) {
  meta.solver.method = "elementary-interval bisection";
  meta.solver.negative_included = true;
  BandPieces pieces;
  if (c == 0.0) {
    pieces.add(0.0, e_max);
    return assemble(std::move(pieces), e_max, std::move(meta));
  }
  if (const auto neg = delta_negative_band(c, ells))
    pieces.add(neg->lo_e, neg->hi_e);
  for (const auto& [klo, khi] : delta_positive_bands(c, ells, std::sqrt(e_max)))
    pieces.add(klo * klo, khi * khi);
  return assemble(std::move(pieces), e_max, std::move(meta));
}

// -- DeltaPrimeS lattice -------------------------------------------------------

// Negative branch, D < 0: band iff 2 sum tanh / kappa <= |D| <= 2 sum coth / kappa.
std::optional<NegativePiece> dps_negative_band(double D,
                                               const std::vector<double>& ells) {
  if (D >= 0.0) return std::nullopt;
  const double absd = -D;
  const auto rho_a = [&](double kappa) {
    double sum = 0.0;
    for (double l : ells) sum += std::tanh(0.5 * kappa * l);
    return 2.0 * sum / kappa;
  };
  const auto rho_b = [&](double kappa) {
    double sum = 0.0;
    for (double l : ells) sum += 1.0 / std::tanh(0.5 * kappa * l);
    return 2.0 * sum / kappa;
  };
  double ell_sum = 0.0;
  for (double l : ells) ell_sum += l;

  double kappa_a = 0.0;
  if (absd < ell_sum) {
    double hi = expand_until([&](double x) { return rho_a(x) < absd; }, 1.0);
    kappa_a = bisect_root([&](double x) { return rho_a(x) - absd; }, 1e-12, hi, false);
  }
  double hib = expand_until([&](double x) { return rho_b(x) < absd; }, 1.0);
  const double kappa_b =
      bisect_root([&](double x) { return rho_b(x) - absd; }, 1e-12, hib, false);
  return NegativePiece{-kappa_b * kappa_b, -kappa_a * kappa_a};
}

std::vector<std::pair<double, double>> dps_positive_bands(
    double D, const std::vector<double>& ells, double k_max) {
  std::vector<std::pair<double, double>> bands;
  const auto boundaries = build_boundaries(ells, k_max);

  double ell_sum = 0.0;
  for (double l : ells) ell_sum += l;

  // D > 0: band iff sum cot(s_j/2) >= D k / 2; the left side falls from +inf,
  // so bands attach to lattice points.
  const auto M = [&](double k) {
    double sum = 0.0;
    for (double l : ells) sum += cot_half(reduce_mod_pi(k * l));
    return sum - 0.5 * D * k;
  };
  const auto M_right = [&](double k, const std::vector<int>& sing) {
    double sum = 0.0;
    for (int j = 0; j < static_cast<int>(ells.size()); ++j)
      if (!is_sing(sing, j)) sum += cot_half(reduce_mod_pi(k * ells[j]));
    return sum - 0.5 * D * k;
  };

  // D < 0: band iff H(k) = sum tan(s_j/2) - |D| k / 2 >= 0.  H is convex on
  // each elementary interval (its derivative is increasing), so it has at
  // most two roots there: locate the minimum first when needed.
  const double absd = -D;
  const auto H = [&](double k) {
    double sum = 0.0;
    for (double l : ells) sum += tan_half(reduce_mod_pi(k * l));
    return sum - 0.5 * absd * k;
  };
  const auto H_left = [&](double k, const std::vector<int>& sing) {
    double sum = 0.0;
    for (int j = 0; j < static_cast<int>(ells.size()); ++j)
      if (!is_sing(sing, j)) sum += tan_half(reduce_mod_pi(k * ells[j]));
    return sum - 0.5 * absd * k;
  };
  const auto Hp = [&](double k) {
    double sum = 0.0;
    for (double l : ells) {
      const double t = tan_half(reduce_mod_pi(k * l));
      sum += 0.5 * l * (1.0 + t * t);
    }
    return sum - 0.5 * absd;
  };
  const auto Hp_left = [&](double k, const std::vector<int>& sing) {
    double sum = 0.0;
    for (int j = 0; j < static_cast<int>(ells.size()); ++j) {
      const double t =
          is_sing(sing, j) ? 0.0 : tan_half(reduce_mod_pi(k * ells[j]));
      sum += 0.5 * ells[j] * (1.0 + t * t);
    }
    return sum - 0.5 * absd;
  };

  double a = 0.0;
  std::vector<int> a_sing;
  for (const auto& b : boundaries) {
    const bool cut = b.sing.empty();
    if (b.k - a <= 1e-13 * std::max(1.0, b.k)) {
      a = b.k;
      a_sing = b.sing;
      continue;
    }
    if (D > 0.0) {
      const double m_right = cut ? M(b.k) : M_right(b.k, b.sing);
      if (m_right >= 0.0) {
        bands.emplace_back(a, b.k);
      } else {
        const double ks = bisect_root(M, a, b.k, false);
        bands.emplace_back(a, ks);
      }
    } else {
      const bool left_band =
          (a == 0.0) ? (ell_sum >= absd) : (H_left(a, a_sing) >= 0.0);
      const double h_right = cut ? H(b.k) : kInf;
      if (left_band) {
        const double hp_left = (a == 0.0) ? (0.5 * (ell_sum - absd))
                                          : Hp_left(a, a_sing);
        const double hp_right = cut ? Hp(b.k) : kInf;
        if (hp_left >= 0.0) {
          bands.emplace_back(a, b.k);  // H increasing: stays nonnegative
        } else if (hp_right <= 0.0) {
          // H decreasing throughout (truncated interval)
          if (h_right >= 0.0) {
            bands.emplace_back(a, b.k);
          } else {
            const double r1 = bisect_root(H, a, b.k, false);
            bands.emplace_back(a, r1);
          }
        } else {
          const double kmin = bisect_root(Hp, a, b.k, true);
          if (H(kmin) >= 0.0) {
            bands.emplace_back(a, b.k);
          } else {
            const double r1 = bisect_root(H, a, kmin, false);
            bands.emplace_back(a, r1);
            if (!(cut && h_right <= 0.0)) {
              const double r2 = bisect_root(H, kmin, b.k, true);
              bands.emplace_back(r2, b.k);
            }
          }
        }
      } else {
        if (!(cut && h_right <= 0.0)) {
          const double r = bisect_root(H, a, b.k, true);
          bands.emplace_back(r, b.k);
        }
      }
    }
    a = b.k;
    a_sing = b.sing;
  }
  return bands;
}

Spectrum dps_like_spectrum(const std::vector<double>& ells, double D, double e_max,
                           SpectrumMeta meta) {
  meta.solver.method = "elementary-interval bisection";
  meta.solver.negative_included = true;
  BandPieces pieces;
  if (D == 0.0) {
    pieces.add(0.0, e_max);
    return assemble(std::move(pieces), e_max, std::move(meta));
  }
  if (const auto neg = dps_negative_band(D, ells)) pieces.add(neg->lo_e, neg->hi_e);
  for (const auto& [klo, khi] : dps_positive_bands(D, ells, std::sqrt(e_max)))
    pieces.add(klo * klo, khi * khi);
  return assemble(std::move(pieces), e_max, std::move(meta));
}

void require_emax(double e_max) {
  if (!(e_max > 0.0) || !std::isfinite(e_max))
    throw std::invalid_argument("energy cutoff must be positive");
}

}  // namespace

// -- public surface ------------------------------------------------------------

double LatticeSpec::ell() const { return std::sqrt(ell1 * ell2); }
double LatticeSpec::theta() const { return ell2 / ell1; }
double LatticeSpec::L() const { return std::max(ell1, ell2); }

LatticeSpec make_lattice(double ell1, double ell2, VertexCoupling coupling) {
  if (!(ell1 > 0.0) || !(ell2 > 0.0) || !std::isfinite(ell1) || !std::isfinite(ell2))
    throw std::invalid_argument("lattice spacings must be positive");
  return LatticeSpec{ell1, ell2, std::move(coupling)};
}

bool Spectrum::in_band(double energy) const {
  for (const auto& iv : intervals)
    if (iv.kind == IntervalKind::band && energy >= iv.lo && energy <= iv.hi)
      return true;
  return false;
}

std::vector<SpectralInterval> Spectrum::gaps() const {
  std::vector<SpectralInterval> out;
  for (const auto& iv : intervals)
    if (iv.kind == IntervalKind::gap) out.push_back(iv);
  return out;
}

std::vector<SpectralInterval> Spectrum::bands() const {
  std::vector<SpectralInterval> out;
  for (const auto& iv : intervals)
    if (iv.kind == IntervalKind::band) out.push_back(iv);
  return out;
}

double f_sum(double k, double v1, double v2, double ell1, double ell2) {
  if (!(k > 0.0)) throw std::invalid_argument("invalid momentum");
  const double vs[2] = {v1, v2};
  const double ls[2] = {ell1, ell2};
  double sum = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double x = k * ls[j];
    const double s = reduce_mod_pi(x);
    if (std::min(s, kPi - s) <= sing_tol(x))
      throw numerical_error("evaluated at lattice singularity");
    sum += (vs[j] - std::cos(x)) / std::sin(x);
  }
  return sum;
}

double f_sum(double k, const BlochBox& v, double ell1, double ell2) {
  return f_sum(k, v.v1, v.v2, ell1, ell2);
}

FExtrema f_extrema_pos(double k, double ell1, double ell2) {
  if (!(k > 0.0)) throw std::invalid_argument("invalid momentum");
  FExtrema out{0.0, 0.0, false};
  for (double l : {ell1, ell2}) {
    const double x = k * l;
    const double s = reduce_mod_pi(x);
    if (std::min(s, kPi - s) <= sing_tol(x)) {
      // One-sided limits: the tangent term from the right, the cotangent term
      // from the left; both vanish.
      out.at_singularity = true;
      continue;
    }
    out.f_plus += tan_half(s);
    out.f_minus -= cot_half(s);
  }
  return out;
}

FExtrema f_extrema_neg(double kappa, double ell1, double ell2) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  FExtrema out{0.0, 0.0, false};
  for (double l : {ell1, ell2}) {
    const double t = std::tanh(0.5 * kappa * l);
    out.f_plus -= t;
    out.f_minus -= 1.0 / t;
  }
  return out;
}

Spectrum delta_spectrum(const LatticeSpec& lat, double e_max) {
  require_emax(e_max);
  const auto* d = std::get_if<Delta>(&lat.coupling);
  if (!d) throw std::invalid_argument("delta_spectrum requires a delta coupling");
  SpectrumMeta meta;
  meta.coupling = fmt_param("delta", "c", d->c);
  meta.l1 = lat.ell1;
  meta.l2 = lat.ell2;
  return delta_like_spectrum({lat.ell1, lat.ell2}, d->c, e_max, std::move(meta));
}

Spectrum dps_spectrum(const LatticeSpec& lat, double e_max) {
  require_emax(e_max);
  const auto* d = std::get_if<DeltaPrimeS>(&lat.coupling);
  if (!d) throw std::invalid_argument("dps_spectrum requires a dprimes coupling");
  SpectrumMeta meta;
  meta.coupling = fmt_param("dprimes", "D", d->D);
  meta.l1 = lat.ell1;
  meta.l2 = lat.ell2;
  return dps_like_spectrum({lat.ell1, lat.ell2}, d->D, e_max, std::move(meta));
}

bool dprime_band_indicator(double k, double C, double ell1, double ell2) {
  if (!(k > 0.0)) throw std::invalid_argument("invalid momentum");
  const double ls[2] = {ell1, ell2};
  const double kc = k * C;
  const double scale = 1.0 + kc * kc;
  double re[2], den[2];
  for (int j = 0; j < 2; ++j) {
    const double x = k * ls[j];
    const double cx = std::cos(x), sx = std::sin(x);
    re[j] = cx + kc * sx;  // Re((1 - ikC) e^{ikl})
    // Im((1 + ikC)^{-2} e^{ikl}) up to the positive factor (1 + k^2 C^2)^2
    den[j] = (1.0 - kc * kc) * sx - 2.0 * kc * cx;
    if (std::abs(den[j]) <= 1e-12 * scale)
      throw numerical_error("indicator undefined at singular k");
  }
  double emin = kInf, emax = -kInf;
  for (double v1 : {-1.0, 1.0})
    for (double v2 : {-1.0, 1.0}) {
      const double e = (v1 - re[0]) / den[0] + (v2 - re[1]) / den[1];
      emin = std::min(emin, e);
      emax = std::max(emax, e);
    }
  return emin <= 0.0 && emax >= 0.0;
}

Spectrum dprime_spectrum(const LatticeSpec& lat, double e_max, int resolution) {
  require_emax(e_max);
  if (resolution < 64) throw std::invalid_argument("resolution must be at least 64");
  const auto* d = std::get_if<DeltaPrime>(&lat.coupling);
  if (!d)
    throw std::invalid_argument("dprime_spectrum requires a dprime coupling");
  const double C = d->C;

  SpectrumMeta meta;
  meta.coupling = fmt_param("dprime", "C", C);
  meta.l1 = lat.ell1;
  meta.l2 = lat.ell2;
  meta.solver.method = "adaptive indicator scan";
  meta.solver.edge_tol_k = 1e-8;
  meta.solver.resolution = resolution;
  meta.solver.negative_included = false;
  if (C > 0.0)
    meta.solver.comment =
        "negative energies not scanned; the vertex coupling binds, so "
        "negative bands may exist";

  const double k_max = std::sqrt(e_max);
  const std::vector<double> ells{lat.ell1, lat.ell2};
  const auto boundaries = build_boundaries(ells, k_max);

  enum class St { band, gap, skip };
  const auto probe = [&](double k) {
    try {
      return dprime_band_indicator(k, C, lat.ell1, lat.ell2) ? St::band : St::gap;
    } catch (const numerical_error&) {
      return St::skip;
    }
  };

  BandPieces pieces;
  double prev_k = 0.0;
  St prev = St::skip;
  double open_lo = -1.0;  // k where the current band started, <0 = closed

  const auto refine = [&](double lo, double hi) {
    // Transition between differing statuses at lo and hi.
    St slo = probe(lo);
    for (int it = 0; it < 120; ++it) {
      if (hi - lo <= 1e-8 * std::max(1.0, hi)) break;
      double mid = 0.5 * (lo + hi);
      St sm = probe(mid);
      if (sm == St::skip) {
        // nudge off the singular point deterministically
        mid = lo + 0.55 * (hi - lo);
        sm = probe(mid);
        if (sm == St::skip) {
          meta.solver.approximate = true;
          meta.solver.notes_k.push_back(mid);
          break;
        }
      }
      if (sm == slo)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  double a = 0.0;
  for (const auto& b : boundaries) {
    if (b.k - a <= 1e-13 * std::max(1.0, b.k)) {
      a = b.k;
      continue;
    }
    const double h = (b.k - a) / resolution;
    for (int i = 0; i < resolution; ++i) {
      const double k = a + (i + 0.5) * h;
      const St st = probe(k);
      if (st == St::skip) {
        meta.solver.notes_k.push_back(k);
        continue;
      }
      if (prev == St::skip) {
        // first valid sample: extend its status back to the scan start
        if (st == St::band) open_lo = (prev_k == 0.0) ? 0.0 : prev_k;
      } else if (st != prev) {
        const double edge = refine(prev_k, k);
        if (st == St::band)
          open_lo = edge;
        else {
          pieces.add(open_lo * open_lo, edge * edge);
          open_lo = -1.0;
        }
      }
      prev = st;
      prev_k = k;
    }
    a = b.k;
  }
  if (open_lo >= 0.0) pieces.add(open_lo * open_lo, e_max);
  return assemble(std::move(pieces), e_max, std::move(meta));
}

Spectrum kp_spectrum(double ell, const VertexCoupling& coupling, double e_max) {
  require_emax(e_max);
  if (!(ell > 0.0) || !std::isfinite(ell))
    throw std::invalid_argument("spacing must be positive");
  SpectrumMeta meta;
  meta.l1 = ell;
  meta.l2 = 0.0;
  if (const auto* d = std::get_if<Delta>(&coupling)) {
    meta.coupling = fmt_param("delta", "c", d->c);
    return delta_like_spectrum({ell}, d->c, e_max, std::move(meta));
  }
  if (const auto* ds = std::get_if<DeltaPrimeS>(&coupling)) {
    meta.coupling = fmt_param("dprimes", "D", ds->D);
    return dps_like_spectrum({ell}, ds->D, e_max, std::move(meta));
  }
  throw std::invalid_argument(
      "kp_spectrum requires a delta or dprimes coupling");
}

Spectrum clip_to_nonnegative(const Spectrum& s) {
  Spectrum out;
  out.e_max = s.e_max;
  out.meta = s.meta;
  out.meta.solver.negative_included = false;
  for (const auto& iv : s.intervals) {
    if (iv.hi <= 0.0) continue;
    SpectralInterval c = iv;
    c.lo = std::max(c.lo, 0.0);
    if (c.hi > c.lo) out.intervals.push_back(c);
  }
  return out;
}

}  // namespace qg
