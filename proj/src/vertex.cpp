#include "qg/vertex.hpp"

#include <cmath>
#include <stdexcept>

#include "qg/errors.hpp"

namespace qg {

namespace {

void require_finite(double x, const char* name) {
  if (!std::isfinite(x))
    throw std::invalid_argument(std::string("coupling parameter ") + name +
                                " must be finite");
}

void require_links(int n) {
  if (n < 2) throw std::invalid_argument("star graph needs at least 2 links");
}

void require_momentum(double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("invalid momentum");
}

}  // namespace

VertexCoupling make_delta(double c) {
  require_finite(c, "c");
  return Delta{c};
}

VertexCoupling make_delta_prime(double C) {
  require_finite(C, "C");
  if (C == 0.0) return Delta{0.0};
  return DeltaPrime{C};
}

VertexCoupling make_delta_prime_s(double D) {
  require_finite(D, "D");
  return DeltaPrimeS{D};
}

VertexCoupling make_perm_invariant(double A, double B) {
  require_finite(A, "A");
  require_finite(B, "B");
  return PermInvariant{A, B};
}

bool perm_is_degenerate(const PermInvariant& p) { return p.A == p.B; }

std::string coupling_family(const VertexCoupling& coupling) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Delta>) return "delta";
        else if constexpr (std::is_same_v<T, DeltaPrime>) return "dprime";
        else if constexpr (std::is_same_v<T, DeltaPrimeS>) return "dprimes";
        else return "perm";
      },
      coupling);
}

StarGraph::StarGraph(int n_links) : links(n_links) { require_links(n_links); }

double unitarity_defect(const ScatteringData& s) {
  return std::abs(std::norm(s.r) + (s.links - 1) * std::norm(s.t) - 1.0);
}

std::pair<double, double> singular_limits(double A, double B, int n) {
  require_links(n);
  return {B - A, n * (A + (n - 1) * B)};
}

std::vector<BoundState> bound_states(const VertexCoupling& coupling, int n) {
  require_links(n);
  std::vector<BoundState> states;

  if (const auto* d = std::get_if<Delta>(&coupling)) {
    if (d->c < 0.0) {
      const double kappa = -d->c / n;
      states.push_back({-kappa * kappa, 1});
    }
  } else if (const auto* dp = std::get_if<DeltaPrime>(&coupling)) {
    if (dp->C > 0.0) states.push_back({-1.0 / (dp->C * dp->C), n - 1});
  } else if (const auto* ds = std::get_if<DeltaPrimeS>(&coupling)) {
    if (ds->D < 0.0) {
      const double kappa = -static_cast<double>(n) / ds->D;
      states.push_back({-kappa * kappa, 1});
    }
  } else {
    const auto& p = std::get<PermInvariant>(coupling);
    const double d1 = p.A - p.B;
    const double d2 = p.A + (n - 1) * p.B;
    if (d1 == 0.0 || d2 == 0.0)
      throw std::domain_error("singular coupling parameters");
    if (d1 < 0.0) {
      const double kappa = -1.0 / d1;
      states.push_back({-kappa * kappa, 1, false});
    }
    if (d2 < 0.0) {
      const double kappa = -1.0 / d2;
      states.push_back({-kappa * kappa, 1, false});
    }
  }
  return states;
}

ScatteringData star_smatrix(const VertexCoupling& coupling, int n, double k) {
  require_links(n);
  require_momentum(k);
  const complexd ik(0.0, k);

  if (const auto* d = std::get_if<Delta>(&coupling)) {
    const complexd den = ik * static_cast<double>(n) - d->c;
    return {k, (d->c - static_cast<double>(n - 2) * ik) / den, 2.0 * ik / den, n};
  }
  if (const auto* dp = std::get_if<DeltaPrime>(&coupling)) {
    const complexd inkC = complexd(0.0, n * k * dp->C);
    const complexd den = static_cast<double>(n) + inkC;
    return {k, (static_cast<double>(2 - n) + inkC) / den, 2.0 / den, n};
  }
  if (const auto* ds = std::get_if<DeltaPrimeS>(&coupling)) {
    const complexd ikD = complexd(0.0, k * ds->D);
    const complexd den = static_cast<double>(n) - ikD;
    return {k, (static_cast<double>(n - 2) - ikD) / den, -2.0 / den, n};
  }
  throw std::domain_error(
      "permutation-invariant coupling has no closed-form S-matrix here; "
      "use perm_reflection_asymptotic");
}

complexd perm_reflection_asymptotic(double A, double B, int n, double k) {
  require_links(n);
  require_momentum(k);
  if (B == 0.0 || A == B)
    throw std::domain_error("asymptotic form not applicable");
  const double ratio = 1.0 - A / B;
  const double dn1 = A + (n - 1) * B;
  const complexd ik_term(0.0, k * ratio * dn1);
  return (static_cast<double>(n - 2) + ik_term) /
         (-static_cast<double>(n) + 2.0 * ratio + ik_term);
}

std::vector<complexd> bc_residual(const VertexCoupling& coupling, int n,
                                  const std::vector<complexd>& f,
                                  const std::vector<complexd>& fp) {
  require_links(n);
  if (static_cast<int>(f.size()) != n || static_cast<int>(fp.size()) != n)
    throw std::invalid_argument("dimension error");

  std::vector<complexd> res;
  res.reserve(n);

  if (const auto* d = std::get_if<Delta>(&coupling)) {
    for (int j = 1; j < n; ++j) res.push_back(f[j] - f[0]);
    complexd sum = 0.0;
    for (const auto& v : fp) sum += v;
    res.push_back(sum - d->c * f[0]);
  } else if (const auto* dp = std::get_if<DeltaPrime>(&coupling)) {
    complexd sum = 0.0;
    for (const auto& v : fp) sum += v;
    res.push_back(sum);
    for (int j = 1; j < n; ++j)
      res.push_back(f[j] - f[0] + dp->C * (fp[j] - fp[0]));
  } else if (const auto* ds = std::get_if<DeltaPrimeS>(&coupling)) {
    for (int j = 1; j < n; ++j) res.push_back(fp[j] - fp[0]);
    complexd sum = 0.0;
    for (const auto& v : f) sum += v;
    res.push_back(sum - ds->D * fp[0]);
  } else {
    const auto& p = std::get<PermInvariant>(coupling);
    complexd fpsum = 0.0;
    for (const auto& v : fp) fpsum += v;
    for (int j = 0; j < n; ++j)
      res.push_back(f[j] - p.A * fp[j] - p.B * (fpsum - fp[j]));
  }
  return res;
}

}  // namespace qg
