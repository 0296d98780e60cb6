#pragma once

#include "qg/vertex.hpp"

namespace qg {

// ---------------------------------------------------------------------------
// "Spiked-onion" geometric scatterer: the single vertex of an n-link star is
// replaced by n nodes (one per halfline) with every pair of nodes joined by
// N parallel links of length ell, all nodes carrying the same delta coupling
// with parameter c.  In the limit N -> infinity with ell = tau/N the scatterer
// mimics the singular delta-prime couplings at high energy.
// ---------------------------------------------------------------------------

struct OnionGraph {
  int n = 2;         // external halflines, >= 2
  int N = 1;         // parallel links per node pair, >= 1
  double ell = 1.0;  // internal link length, > 0
  double c = 0.0;    // delta parameter at every node
};

OnionGraph make_onion(int n, int N, double ell, double c);

/// The two combinations through which the internal links enter the closed
/// form: P = 1 - c/(ik) + iN(n-1) cot(k ell), Q = iN / sin(k ell).
/// Re P = 1 holds for any real c.
struct PQPair {
  complexd P;
  complexd Q;
  double k;
};

PQPair onion_pq(const OnionGraph& g, double k);

/// Closed-form amplitudes of the onion scatterer,
///   r = (|P|^2 - (n-2) conj(P) Q + (n-1) Q^2) / (P^2 - (n-2) P Q + (n-1) Q^2)
///   t = 2 Q / (P^2 - (n-2) P Q + (n-1) Q^2).
/// Throws numerical_error when k*ell is within 1e-9 of a multiple of pi
/// (internal resonance; cot and csc blow up).
ScatteringData onion_smatrix(const OnionGraph& g, double k);

/// N -> infinity amplitudes at fixed tau = N*ell,
///   r = (n-2 - nc/(ik) - binom(n,2) ik tau) / (-n + nc/(ik) + binom(n,2) ik tau)
///   t = -2 / (-n + nc/(ik) + binom(n,2) ik tau).
ScatteringData onion_limit_smatrix(int n, double tau, double c, double k);

/// High-energy form of the limit (the c-terms dropped); exact for c = 0.
ScatteringData high_energy_smatrix(int n, double tau, double k);

/// The tau that makes the geometric scatterer mimic a singular coupling at
/// high energies: tau = -2C/(n-1) for DeltaPrime (needs C < 0), and
/// tau = 2D/(n(n-1)) for DeltaPrimeS (needs D > 0).
double tau_equivalent(const VertexCoupling& coupling, int n);

}  // namespace qg
