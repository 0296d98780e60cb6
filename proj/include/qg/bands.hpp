#pragma once

#include <string>
#include <vector>

#include "qg/vertex.hpp"

namespace qg {

// ---------------------------------------------------------------------------
// Band spectra of rectangular lattices with spacings ell1, ell2 and the same
// vertex coupling at every node.  Quasimomenta enter the band conditions only
// through v_j = cos(theta_j ell_j), which sweep [-1,1]; an energy belongs to
// a band iff the condition is solvable for some (v1, v2) in that box.
// ---------------------------------------------------------------------------

struct LatticeSpec {
  double ell1 = 1.0;
  double ell2 = 1.0;
  VertexCoupling coupling = Delta{0.0};

  double ell() const;    // sqrt(ell1 * ell2)
  double theta() const;  // ell2 / ell1
  double L() const;      // max(ell1, ell2)
};

LatticeSpec make_lattice(double ell1, double ell2, VertexCoupling coupling);

/// A point of the Bloch box, |v1| <= 1 and |v2| <= 1.
struct BlochBox {
  double v1 = 0.0;
  double v2 = 0.0;
};

enum class IntervalKind { band, gap };

struct SpectralInterval {
  double lo;
  double hi;
  IntervalKind kind;
};

struct SolverInfo {
  std::string method;
  double edge_tol_k = 1e-12;          // relative bisection tolerance in k
  int resolution = 0;                 // samples per elementary interval (scan)
  bool negative_included = true;      // negative-energy branch searched
  bool approximate = false;           // some edge could not be certified
  std::vector<double> notes_k;        // k values flagged during the scan
  std::string comment;                // free-form caveat, e.g. unscanned branch
};

struct SpectrumMeta {
  std::string coupling;  // textual form, e.g. "delta:c=1.5"
  double l1 = 0.0;
  double l2 = 0.0;
  double e_max = 0.0;
  SolverInfo solver;
};

/// Ordered, alternating band/gap intervals covering [min(alpha_1, 0), e_max].
/// A gap below the first band is reported only when the spectral threshold
/// alpha_1 is positive (attractive-free delta lattices start at 0 or below).
struct Spectrum {
  std::vector<SpectralInterval> intervals;
  double e_max = 0.0;
  SpectrumMeta meta;

  bool in_band(double energy) const;
  std::vector<SpectralInterval> gaps() const;
  std::vector<SpectralInterval> bands() const;
};

// -- band-condition building blocks -----------------------------------------

/// F(k; v1, v2) = sum_j (v_j - cos k ell_j) / sin k ell_j.
/// Throws numerical_error within 1e-12 of a lattice singularity k ell_j = m pi.
double f_sum(double k, double v1, double v2, double ell1, double ell2);
double f_sum(double k, const BlochBox& v, double ell1, double ell2);

struct FExtrema {
  double f_minus;
  double f_plus;
  bool at_singularity = false;  // a one-sided limit was substituted
};

/// Extrema of F(k; .,.) over the Bloch box at positive energy:
///   F_plus(k)  = sum_j tan(s_j / 2),   F_minus(k) = -sum_j cot(s_j / 2),
/// with s_j = k ell_j mod pi.  At lattice singularities the value is the
/// one-sided limit (0 contribution from the singular term), flagged.
FExtrema f_extrema_pos(double k, double ell1, double ell2);

/// Negative-energy counterparts at energy -kappa^2:
///   F_plus = -sum_j tanh(kappa ell_j / 2),  F_minus = -sum_j coth(kappa ell_j / 2).
FExtrema f_extrema_neg(double kappa, double ell1, double ell2);

// -- spectra -----------------------------------------------------------------

/// Delta lattice.  Positive energies: k^2 lies in a gap iff +-c/2k > +-F_pm(k)
/// for +-c > 0; negative energies: -kappa^2 is in a band iff
/// F_minus(kappa) <= c/2kappa <= F_plus(kappa).  Exact edge extraction by
/// monotone bisection on the elementary intervals between lattice
/// singularities.
Spectrum delta_spectrum(const LatticeSpec& lat, double e_max);

/// DeltaPrimeS lattice: bands are determined by -+F_-+(k) >= +-Dk/2 for
/// +-D > 0 at positive energies and F_plus >= D kappa/2 >= F_minus below zero.
Spectrum dps_spectrum(const LatticeSpec& lat, double e_max);

/// True iff the delta-prime band condition
///   sum_j (v_j - Re((1-ikC) e^{ik ell_j})) / Im((1+ikC)^{-2} e^{ik ell_j}) = 0
/// is solvable over the Bloch box; affine in (v1, v2), so it suffices to test
/// whether the four corner values straddle zero.  Throws numerical_error when
/// a denominator vanishes to tolerance ("indicator undefined at singular k").
bool dprime_band_indicator(double k, double C, double ell1, double ell2);

/// DeltaPrime lattice, positive energies only: adaptive scan of the band
/// indicator with bisection refinement of the edges to 1e-8 relative in k.
Spectrum dprime_spectrum(const LatticeSpec& lat, double e_max, int resolution = 512);

/// One-dimensional Kronig-Penney specialization (single spacing ell) for the
/// Delta and DeltaPrimeS couplings; the DeltaPrimeS array spectrum equals the
/// delta-prime array spectrum of the same parameters.
Spectrum kp_spectrum(double ell, const VertexCoupling& coupling, double e_max);

/// Drop all intervals below zero energy (CLI default presentation).
Spectrum clip_to_nonnegative(const Spectrum& s);

}  // namespace qg
