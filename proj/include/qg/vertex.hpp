#pragma once

#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qg {

using complexd = std::complex<double>;

// ---------------------------------------------------------------------------
// Vertex couplings on an n-link star graph.
//
// All derivatives are outward (along increasing link coordinate), so the
// boundary conditions read, with f_j = f_j(0+) and f'_j = f'_j(0+):
//
//   Delta        f_1 = ... = f_n =: f,         sum_j f'_j = c f
//   DeltaPrime   sum_j f'_j = 0,               f_j - f_k + C (f'_j - f'_k) = 0
//   DeltaPrimeS  f'_1 = ... = f'_n =: f',      sum_j f_j = D f'
//   PermInvariant  f_j = A f'_j + B sum_{k!=j} f'_k
// ---------------------------------------------------------------------------

struct Delta {
  double c = 0.0;  // 1/length
};

struct DeltaPrime {
  double C = 0.0;  // length, nonzero after normalization
};

struct DeltaPrimeS {
  double D = 0.0;  // length
};

struct PermInvariant {
  double A = 0.0;  // length
  double B = 0.0;  // length
};

using VertexCoupling = std::variant<Delta, DeltaPrime, DeltaPrimeS, PermInvariant>;

/// Validating factories.  make_delta_prime(0) normalizes to Delta{0}, since
/// the delta-prime conditions with C = 0 coincide with the free delta vertex.
VertexCoupling make_delta(double c);
VertexCoupling make_delta_prime(double C);
VertexCoupling make_delta_prime_s(double D);
VertexCoupling make_perm_invariant(double A, double B);

/// A = B exactly; the inverted form of the permutation-invariant conditions
/// does not exist there and parameter-inverting operations reject it.
bool perm_is_degenerate(const PermInvariant& p);

/// "delta", "dprime", "dprimes" or "perm".
std::string coupling_family(const VertexCoupling& coupling);

/// n halflines joined at a single vertex.
struct StarGraph {
  explicit StarGraph(int n_links);
  int links;
};

struct BoundState {
  double energy;                       // < 0, units 1/length^2
  int multiplicity;                    // >= 1
  bool multiplicity_specified = true;  // false for PermInvariant states
};

struct ScatteringData {
  double k;    // momentum of the incident plane wave, > 0
  complexd r;  // reflection amplitude on the incident link
  complexd t;  // transmission amplitude onto each of the other n-1 links
  int links;   // n
};

/// | |r|^2 + (n-1)|t|^2 - 1 |
double unitarity_defect(const ScatteringData& s);

/// Singular limits of the permutation-invariant family: the parameters kept
/// fixed while A,B -> +-infinity are C = B - A and D = n [A + (n-1) B].
std::pair<double, double> singular_limits(double A, double B, int n);

/// Bound states localized at the junction.  Delta binds iff c < 0 at energy
/// -(c/n)^2; DeltaPrime iff C > 0 at -1/C^2 with multiplicity n-1;
/// DeltaPrimeS iff D < 0 at -(n/D)^2.  PermInvariant has up to two states
/// -kappa_j^2 with kappa_1 = -1/(A-B), kappa_2 = -1/(A+(n-1)B), kept when the
/// denominator is negative; their multiplicities are reported as unspecified.
std::vector<BoundState> bound_states(const VertexCoupling& coupling, int n);

/// S-matrix of a plane wave entering one link of the star.
///   Delta:        r = (c - (n-2)ik) / (ikn - c),    t = 2ik / (ikn - c)
///   DeltaPrime:   r = (2 - n + inkC) / (n + inkC),  t = 2 / (n + inkC)
///   DeltaPrimeS:  r = (n - 2 - ikD) / (n - ikD),    t = -2 / (n - ikD)
/// PermInvariant is rejected; only its high-energy reflection is available,
/// see perm_reflection_asymptotic.
ScatteringData star_smatrix(const VertexCoupling& coupling, int n, double k);

/// Leading high-energy form of the permutation-invariant reflection
/// amplitude; tends to 1 (Neumann decoupling) as k -> infinity.
/// Requires B != 0 and A != B.
complexd perm_reflection_asymptotic(double A, double B, int n, double k);

/// Residuals of the n independent boundary conditions for given boundary
/// values f and outward derivatives fp (each of length n).  Zero vector iff
/// the data satisfies the coupling; used as the oracle that S-matrix and
/// bound-state solutions actually solve their defining conditions.
std::vector<complexd> bc_residual(const VertexCoupling& coupling, int n,
                                  const std::vector<complexd>& f,
                                  const std::vector<complexd>& fp);

}  // namespace qg
