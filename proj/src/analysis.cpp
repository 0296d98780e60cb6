#include "qg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qg/errors.hpp"

namespace qg {

namespace {

constexpr double kPi = std::numbers::pi;

double frac_part(double x) { return x - std::floor(x); }

// Minimum of 2k tan(pi {n theta}/2) over one family of lattice points.
void lattice_minima(double theta, double ell, double k_max, double* current_min) {
  const long long n_max = static_cast<long long>(std::floor(k_max * ell / kPi * (1.0 + 1e-14)));
  for (long long n = 1; n <= n_max; ++n) {
    const double k = kPi * static_cast<double>(n) / ell;
    const double f = frac_part(static_cast<double>(n) * theta);
    const double val = 2.0 * k * std::tan(0.5 * kPi * f);
    *current_min = std::min(*current_min, val);
  }
}

bool is_lattice_energy(double e, double ell1, double ell2, double rel_tol) {
  for (double l : {ell1, ell2}) {
    const double m = std::round(std::sqrt(std::max(e, 0.0)) * l / kPi);
    if (m < 1.0) continue;
    const double cand = (kPi * m / l) * (kPi * m / l);
    if (std::abs(e - cand) <= rel_tol * std::max(1.0, std::abs(e))) return true;
  }
  return false;
}

// A gap interval (lo, hi) sits inside some gap of `kp` up to edge tolerance.
bool contained_in_some_gap(const Spectrum& kp, double lo, double hi, double tol) {
  for (const auto& iv : kp.intervals) {
    if (iv.kind != IntervalKind::gap) continue;
    if (iv.lo <= lo + tol && hi <= iv.hi + tol) return true;
  }
  return false;
}

}  // namespace

EnhancementFactors enhancement(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("theta must be positive");
  const auto g = [](double t) {
    return (2.0 * t + 1.0 + std::sqrt(1.0 + 4.0 * t)) / (2.0 * (t + 1.0));
  };
  const double gt = g(theta);
  return {theta, gt, std::max(gt, g(1.0 / theta))};
}

double critical_coupling(double theta, double ell1, double ell2, double e_max) {
  if (!(theta > 0.0) || !(ell1 > 0.0) || !(ell2 > 0.0))
    throw std::invalid_argument("theta and spacings must be positive");
  if (!(e_max > 0.0)) throw std::invalid_argument("energy cutoff must be positive");

  const double k_max = std::sqrt(e_max);
  double best = std::numeric_limits<double>::infinity();
  lattice_minima(theta, ell1, k_max, &best);
  lattice_minima(1.0 / theta, ell2, k_max, &best);
  if (!std::isfinite(best))
    throw numerical_error("no lattice points below cutoff");
  return best;
}

GapReport report_for_spectrum(const LatticeSpec& lat, const Spectrum& s) {
  GapReport rep;
  rep.lattice = lat;
  rep.e_max = s.e_max;

  const auto bands = s.bands();
  const auto gaps = s.gaps();
  const double alpha1 = bands.empty() ? s.e_max : bands.front().lo;
  const double rel = 1e-8;

  // Gaps strictly above the threshold; the leading below-threshold interval
  // and a negative-to-positive gap are excluded from the census.
  for (const auto& g : gaps) {
    if (g.lo < 0.0 || g.lo <= alpha1) continue;
    ++rep.gap_count;
    rep.gap_widths.push_back(g.hi - g.lo);
    if (!rep.first_gap_lo) rep.first_gap_lo = g.lo;
  }

  double c = 0.0, D = 0.0;
  const bool is_delta = std::holds_alternative<Delta>(lat.coupling);
  const bool is_dps = std::holds_alternative<DeltaPrimeS>(lat.coupling);
  if (is_delta) c = std::get<Delta>(lat.coupling).c;
  if (is_dps) D = std::get<DeltaPrimeS>(lat.coupling).D;

  // Threshold sign.
  if (is_delta) {
    if (c > 0.0) rep.threshold_sign_ok = alpha1 > 0.0;
    else if (c < 0.0) rep.threshold_sign_ok = alpha1 < 0.0;
    else rep.threshold_sign_ok = alpha1 == 0.0;
  } else if (is_dps) {
    if (D >= 0.0) rep.threshold_sign_ok = std::abs(alpha1) <= rel;
    else rep.threshold_sign_ok = alpha1 < 0.0;
  }

  // Edge quantization: for delta with c > 0 each interior upper band edge is
  // a lattice energy (pi m / ell_j)^2; for c < 0 the lower edges from the
  // second band on.  The roles swap for the DeltaPrimeS lattice.
  const auto check_edges = [&](bool upper, bool skip_first) {
    for (std::size_t i = skip_first ? 1 : 0; i < bands.size(); ++i) {
      const double e = upper ? bands[i].hi : bands[i].lo;
      if (upper && i + 1 == bands.size() &&
          e >= s.e_max - 1e-9 * std::max(1.0, s.e_max))
        continue;  // truncated at the cutoff
      if (e <= 0.0) continue;
      if (!is_lattice_energy(e, lat.ell1, lat.ell2, rel))
        rep.edge_quantization_ok = false;
    }
  };
  if (is_delta && c > 0.0) check_edges(true, false);
  if (is_delta && c < 0.0) check_edges(false, true);
  if (is_dps && D > 0.0) check_edges(false, true);  // alpha_1 = 0 exempt
  if (is_dps && D < 0.0) check_edges(true, true);

  // Detached negative band.
  if (is_delta && c < -4.0 * (1.0 / lat.ell1 + 1.0 / lat.ell2)) {
    const double a2 = std::pow(kPi / lat.L(), 2);
    rep.deep_negative_ok = bands.size() >= 2 && bands.front().hi < 0.0 &&
                           std::abs(bands[1].lo - a2) <= rel * a2;
  }
  if (is_dps && -lat.ell1 - lat.ell2 < D && D < 0.0) {
    rep.deep_negative_ok = bands.size() >= 2 && bands.front().hi < 0.0 &&
                           std::abs(bands[1].lo) <= rel;
  }

  // Containment in the one-dimensional gap sets, nonnegative gaps only.
  if ((is_delta && c != 0.0) || (is_dps && D != 0.0)) {
    const Spectrum kp1 = kp_spectrum(lat.ell1, lat.coupling, s.e_max);
    const Spectrum kp2 = kp_spectrum(lat.ell2, lat.coupling, s.e_max);
    for (const auto& g : gaps) {
      if (g.lo < 0.0) continue;
      const double tol = 1e-8 * std::max(1.0, g.hi);
      if (!contained_in_some_gap(kp1, g.lo, g.hi, tol) ||
          !contained_in_some_gap(kp2, g.lo, g.hi, tol))
        rep.kp_containment_ok = false;
    }
  }

  // Asymptotic width bounds, asserted only above a comfortably high energy;
  // the O(1/r) corrections carry no explicit constants.
  const double e_asym = 100.0 * std::pow(2.0 * kPi / (lat.ell1 + lat.ell2), 2);
  const double slack = 1.1;
  if (is_delta && c != 0.0) {
    const double bound = 2.0 * std::abs(c) / (lat.ell1 + lat.ell2) * slack;
    for (const auto& g : gaps) {
      if (g.lo <= alpha1 || g.lo < e_asym || g.hi >= s.e_max) continue;
      const double w = g.hi - g.lo;
      if (w > bound)
        rep.bound_violations.push_back({g.lo, g.hi, "gap width", bound, w});
    }
  }
  if (is_dps && D != 0.0) {
    const double theta = lat.theta();
    const double upper = 8.0 / std::abs(D) *
                         (1.0 / lat.ell1 + 1.0 / lat.ell2) *
                         enhancement(theta).e * slack;
    const double lower = 8.0 / (std::abs(D) * lat.L()) / slack;
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const auto& b = bands[i];
      if (b.lo < e_asym || b.hi >= s.e_max) continue;
      const double w = b.hi - b.lo;
      if (w > upper)
        rep.bound_violations.push_back({b.lo, b.hi, "band width upper", upper, w});
      if (w < lower)
        rep.bound_violations.push_back({b.lo, b.hi, "band width lower", lower, w});
    }
  }
  return rep;
}

GapReport verify_propositions(const LatticeSpec& lat, double e_max) {
  Spectrum s;
  if (std::holds_alternative<Delta>(lat.coupling))
    s = delta_spectrum(lat, e_max);
  else if (std::holds_alternative<DeltaPrimeS>(lat.coupling))
    s = dps_spectrum(lat, e_max);
  else if (std::holds_alternative<DeltaPrime>(lat.coupling))
    s = dprime_spectrum(lat, e_max);
  else
    throw std::invalid_argument(
        "verify_propositions requires delta, dprime or dprimes coupling");
  return report_for_spectrum(lat, s);
}

std::vector<GapCensusRow> gap_census(double theta, double ell,
                                     const std::vector<double>& coupling_values,
                                     double e_max) {
  if (coupling_values.empty())
    throw std::invalid_argument("coupling value list must not be empty");
  if (!(theta > 0.0) || !(ell > 0.0))
    throw std::invalid_argument("theta and ell must be positive");

  const double ell1 = ell / std::sqrt(theta);
  const double ell2 = ell * std::sqrt(theta);
  std::vector<GapCensusRow> rows;
  rows.reserve(coupling_values.size());
  for (double c : coupling_values) {
    const LatticeSpec lat = make_lattice(ell1, ell2, make_delta(c));
    const Spectrum s = delta_spectrum(lat, e_max);
    const GapReport rep = report_for_spectrum(lat, s);
    GapCensusRow row{c, rep.gap_count, std::nullopt, std::nullopt};
    if (rep.first_gap_lo) {
      row.first_gap_lo = rep.first_gap_lo;
      for (const auto& g : s.gaps())
        if (g.lo == *rep.first_gap_lo) row.first_gap_hi = g.hi;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qg
