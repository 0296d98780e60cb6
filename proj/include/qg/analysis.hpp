#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qg/bands.hpp"

namespace qg {

// ---------------------------------------------------------------------------
// Quantitative checks of the lattice spectra at finite cutoff: gap counting,
// the critical coupling below which a delta lattice stays gapless, band-
// conspiracy enhancement factors, and asymptotic width bounds.
// ---------------------------------------------------------------------------

struct EnhancementFactors {
  double theta;
  double g;  // (2 theta + 1 + sqrt(1 + 4 theta)) / (2 (theta + 1)), > 1
  double e;  // max(g(theta), g(1/theta)), <= 4/3
};

EnhancementFactors enhancement(double theta);

/// Smallest c > 0 opening at least one positive-energy gap below e_max:
/// the minimum of 2k F_plus(k) over the lattice points k = pi n / ell_1 and
/// pi m / ell_2 with k <= sqrt(e_max), where F_plus at a lattice point is the
/// one-sided limit tan(pi {n theta} / 2) (resp. theta -> 1/theta).
/// Throws numerical_error when no lattice point lies below the cutoff.
double critical_coupling(double theta, double ell1, double ell2, double e_max);

struct BoundViolation {
  double lo;
  double hi;
  std::string what;  // which bound was violated
  double bound;
  double value;
};

struct GapReport {
  LatticeSpec lattice;
  double e_max = 0.0;
  int gap_count = 0;                  // gaps strictly above the threshold
  std::vector<double> gap_widths;
  bool edge_quantization_ok = true;   // band edges at (pi m / ell_j)^2
  bool threshold_sign_ok = true;      // sign of alpha_1 vs coupling sign
  bool deep_negative_ok = true;       // detached negative band structure
  bool kp_containment_ok = true;      // gaps inside both 1D gap sets
  std::vector<BoundViolation> bound_violations;
  std::optional<double> first_gap_lo;
};

/// Computes the spectrum and checks the structural statements that apply to
/// the coupling family; violated bounds are reported, never thrown.
GapReport verify_propositions(const LatticeSpec& lat, double e_max);

/// Same checks evaluated on an externally supplied spectrum (e.g. one read
/// back from a file) instead of recomputing it.
GapReport report_for_spectrum(const LatticeSpec& lat, const Spectrum& s);

struct GapCensusRow {
  double coupling_value;
  int gap_count;
  std::optional<double> first_gap_lo;
  std::optional<double> first_gap_hi;
};

/// Delta-lattice gap census over coupling values at spacings
/// ell1 = ell / sqrt(theta), ell2 = ell * sqrt(theta).
std::vector<GapCensusRow> gap_census(double theta, double ell,
                                     const std::vector<double>& coupling_values,
                                     double e_max);

}  // namespace qg
