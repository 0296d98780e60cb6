#include "qg/geoscatter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qg/errors.hpp"

namespace qg {

namespace {

constexpr double kPi = std::numbers::pi;

void require_momentum(double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("invalid momentum");
}

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("tau must be positive");
}

double binom2(int n) { return 0.5 * n * (n - 1); }

// Distance of x to the nearest multiple of pi.
double dist_to_pi_multiple(double x) {
  const double r = std::remainder(x, kPi);
  return std::abs(r);
}

}  // namespace

OnionGraph make_onion(int n, int N, double ell, double c) {
  if (n < 2) throw std::invalid_argument("onion graph needs n >= 2 halflines");
  if (N < 1) throw std::invalid_argument("onion graph needs N >= 1 links per pair");
  if (!(ell > 0.0) || !std::isfinite(ell))
    throw std::invalid_argument("internal link length must be positive");
  if (!std::isfinite(c)) throw std::invalid_argument("delta parameter must be finite");
  return OnionGraph{n, N, ell, c};
}

PQPair onion_pq(const OnionGraph& g, double k) {
  require_momentum(k);
  const double kl = k * g.ell;
  const complexd gamma = g.c / complexd(0.0, k);
  const complexd P = 1.0 - gamma +
                     complexd(0.0, g.N * (g.n - 1)) * (std::cos(kl) / std::sin(kl));
  const complexd Q = complexd(0.0, g.N) / std::sin(kl);
  return {P, Q, k};
}

ScatteringData onion_smatrix(const OnionGraph& g, double k) {
  require_momentum(k);
  if (dist_to_pi_multiple(k * g.ell) < 1e-9)
    throw numerical_error("internal resonance: amplitudes singular");

  const auto [P, Q, kk] = onion_pq(g, k);
  // Solving  r P - (n-1) Q t = conj(P),  -r Q + t (P - (n-2) Q) = Q  by
  // Cramer's rule.  The determinant carries -(n-1) Q^2; only with that sign
  // does |den|^2 - |num_r|^2 = 4 (n-1) |Q|^2 hold, which is what makes the
  // S-matrix unitary.
  const double m = static_cast<double>(g.n - 2);
  const complexd den = P * P - m * P * Q - static_cast<double>(g.n - 1) * Q * Q;
  const complexd num_r =
      std::norm(P) - m * std::conj(P) * Q + static_cast<double>(g.n - 1) * Q * Q;
  return {k, num_r / den, 2.0 * Q / den, g.n};
}

ScatteringData onion_limit_smatrix(int n, double tau, double c, double k) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  require_tau(tau);
  require_momentum(k);
  const complexd ik(0.0, k);
  const complexd den = -static_cast<double>(n) + static_cast<double>(n) * c / ik +
                       binom2(n) * ik * tau;
  if (std::abs(den) < 1e-12)
    throw numerical_error("limiting amplitude singular");
  const complexd num_r = static_cast<double>(n - 2) -
                         static_cast<double>(n) * c / ik - binom2(n) * ik * tau;
  return {k, num_r / den, -2.0 / den, n};
}

ScatteringData high_energy_smatrix(int n, double tau, double k) {
  return onion_limit_smatrix(n, tau, 0.0, k);
}

double tau_equivalent(const VertexCoupling& coupling, int n) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (const auto* dp = std::get_if<DeltaPrime>(&coupling)) {
    if (dp->C < 0.0) return -2.0 * dp->C / (n - 1);
    throw std::domain_error("no geometric equivalent with positive tau");
  }
  if (const auto* ds = std::get_if<DeltaPrimeS>(&coupling)) {
    if (ds->D > 0.0) return 2.0 * ds->D / (static_cast<double>(n) * (n - 1));
    throw std::domain_error("no geometric equivalent with positive tau");
  }
  throw std::domain_error("no geometric equivalent with positive tau");
}

}  // namespace qg
