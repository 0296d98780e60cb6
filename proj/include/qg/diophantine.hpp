#pragma once

#include <cstdint>
#include <vector>

#include "qg/dd.hpp"

namespace qg {

// ---------------------------------------------------------------------------
// Continued fractions and rational-approximation quality.  How fast the
// spacing ratio theta is approximated by rationals decides whether a weakly
// coupled delta lattice has gaps at all, so the quantities here are computed
// in double-double precision and the expansion stops as soon as further
// quotients could not be certified.
// ---------------------------------------------------------------------------

struct ContinuedFraction {
  std::int64_t a0 = 0;
  std::vector<std::int64_t> quotients;  // a1, a2, ...; all >= 1
  bool exact = false;                   // expansion terminated (rational input)
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;  // > 0, gcd(p, q) = 1 by the recurrence
};

/// Gauss-map expansion of x > 0 to at most `depth` partial quotients.  Stops
/// early with exact = true when the remainder vanishes, and with exact =
/// false when a quotient exceeds 1e12 (precision exhausted: the remainder is
/// indistinguishable from zero at working precision).
ContinuedFraction cf_expand(Dd x, int depth);
ContinuedFraction cf_expand(double x, int depth);

/// Exact expansion of p/q > 0 by the Euclidean algorithm; always exact.
ContinuedFraction cf_from_ratio(std::int64_t p, std::int64_t q, int depth = 64);

/// First `count` convergents p_i/q_i (i = 0 uses the integer part alone).
/// count must not exceed 1 + quotients.size().
std::vector<Convergent> convergents(const ContinuedFraction& cf, int count);

/// Distance of x to the nearest integer, in [0, 1/2].
double dist_to_nearest_int(Dd x);

struct ApproxQuality {
  std::vector<Convergent> convs;
  std::vector<double> qualities;  // q_i * || q_i theta || per convergent
  double min_quality = 0.0;       // finite-depth estimate of the
                                  // badly-approximable constant
  bool rational = false;          // expansion terminated; min_quality = 0
};

/// Per-convergent approximation qualities q*||q theta|| and their minimum.
ApproxQuality approx_quality(Dd theta, int depth);

struct HurwitzSequence {
  std::vector<Convergent> members;
  bool complete = true;  // false when precision ran out before `count`
};

/// Even-length truncations m_r/n_r approaching theta from below whose scaled
/// error n_r |n_r theta - m_r| stays under (1 + 1e-6)/sqrt(5).  Along this
/// sequence {n_r theta} -> 0, which is what drives gap formation at weak
/// coupling.  Throws std::domain_error when theta is rational to working
/// precision.
HurwitzSequence hurwitz_sequence(Dd theta, int count);

}  // namespace qg
