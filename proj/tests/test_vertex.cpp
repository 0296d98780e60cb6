#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qg/errors.hpp"
#include "qg/vertex.hpp"

using namespace qg;
using doctest::Approx;

namespace {

// Wavefunction data of the scattering solution at the vertex: boundary value
// and outward derivative on the incident link, then on the n-1 outgoing ones.
void assemble_scattering_data(const ScatteringData& s, std::vector<complexd>* f,
                              std::vector<complexd>* fp) {
  const complexd ik(0.0, s.k);
  f->assign(s.links, s.t);
  fp->assign(s.links, ik * s.t);
  (*f)[0] = 1.0 + s.r;
  (*fp)[0] = -ik + ik * s.r;
}

}  // namespace

TEST_CASE("singular limits of the permutation-invariant family") {
  CHECK(singular_limits(1.0, 1.0, 3) == std::pair{0.0, 9.0});
  CHECK(singular_limits(0.0, 0.0, 5) == std::pair{0.0, 0.0});
  CHECK(singular_limits(-1.0, 2.0, 4) == std::pair{3.0, 20.0});
  CHECK_THROWS_AS(singular_limits(1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("coupling factories normalize and validate") {
  CHECK(std::holds_alternative<Delta>(make_delta_prime(0.0)));
  CHECK(std::get<Delta>(make_delta_prime(0.0)).c == 0.0);
  CHECK(std::holds_alternative<DeltaPrime>(make_delta_prime(0.5)));
  CHECK_THROWS_AS(make_delta(std::nan("")), std::invalid_argument);
  CHECK(perm_is_degenerate(PermInvariant{2.0, 2.0}));
  CHECK_FALSE(perm_is_degenerate(PermInvariant{2.0, 2.0 + 1e-15}));
  CHECK_THROWS_AS(StarGraph(1), std::invalid_argument);
  CHECK(StarGraph(2).links == 2);
}

TEST_CASE("bound states of the three named couplings") {
  const auto attractive_delta = bound_states(make_delta(-4.0), 2);
  REQUIRE(attractive_delta.size() == 1);
  CHECK(attractive_delta[0].energy == Approx(-4.0).epsilon(1e-14));
  CHECK(attractive_delta[0].multiplicity == 1);

  CHECK(bound_states(make_delta(2.0), 3).empty());

  const auto dp = bound_states(make_delta_prime(0.5), 4);
  REQUIRE(dp.size() == 1);
  CHECK(dp[0].energy == Approx(-4.0).epsilon(1e-14));
  CHECK(dp[0].multiplicity == 3);
  CHECK(bound_states(make_delta_prime(-0.5), 4).empty());

  const auto dps = bound_states(make_delta_prime_s(-3.0), 2);
  REQUIRE(dps.size() == 1);
  CHECK(dps[0].energy == Approx(-4.0 / 9.0).epsilon(1e-14));
  CHECK(dps[0].multiplicity == 1);
  CHECK(bound_states(make_delta_prime_s(3.0), 2).empty());
}

TEST_CASE("permutation-invariant bound states") {
  const auto states = bound_states(make_perm_invariant(-1.0, 0.0), 3);
  REQUIRE(states.size() == 2);
  CHECK(states[0].energy == Approx(-1.0));
  CHECK(states[1].energy == Approx(-1.0));
  CHECK_FALSE(states[0].multiplicity_specified);

  // A = B and vanishing second denominator are rejected outright.
  CHECK_THROWS_AS(bound_states(make_perm_invariant(1.0, 1.0), 3),
                  std::domain_error);
  CHECK_THROWS_AS(bound_states(make_perm_invariant(-2.0, 1.0), 3),
                  std::domain_error);

  // Only channels with a negative denominator bind.
  CHECK(bound_states(make_perm_invariant(2.0, 1.0), 3).empty());
  CHECK(bound_states(make_perm_invariant(1.0, 2.0), 3).size() == 1);
}

TEST_CASE("singular limit drives the perm bound state onto the dprime one") {
  // Along A = -s, B = C - s the difference A - B = -C stays fixed, so
  // kappa_1 = 1/C for every s; the second state slides to zero energy.
  const double C = 2.0;
  for (double s : {1.0, 10.0, 1e4}) {
    const auto states = bound_states(make_perm_invariant(-s, C - s), 4);
    REQUIRE(!states.empty());
    CHECK(states[0].energy == Approx(-1.0 / (C * C)).epsilon(1e-12));
  }
  const auto dp = bound_states(make_delta_prime(C), 4);
  CHECK(dp[0].energy == Approx(-1.0 / (C * C)));
}

TEST_CASE("star S-matrix closed forms") {
  const auto free3 = star_smatrix(make_delta(0.0), 3, 1.7);
  CHECK(free3.r.real() == Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(free3.r.imag() == Approx(0.0));
  CHECK(free3.t.real() == Approx(2.0 / 3.0).epsilon(1e-14));

  const auto dps0 = star_smatrix(make_delta_prime_s(0.0), 4, 1.0);
  CHECK(dps0.r == complexd(0.5, 0.0));
  CHECK(dps0.t == complexd(-0.5, 0.0));

  const auto dp = star_smatrix(make_delta_prime(1.0), 2, 2.0);
  CHECK(dp.r.real() == Approx(0.8).epsilon(1e-14));
  CHECK(dp.r.imag() == Approx(0.4).epsilon(1e-14));
  CHECK(dp.t.real() == Approx(0.2).epsilon(1e-14));
  CHECK(dp.t.imag() == Approx(-0.4).epsilon(1e-14));

  const auto d = star_smatrix(make_delta(-4.0), 2, 1.0);
  const complexd expected = -4.0 / complexd(4.0, 2.0);
  CHECK(std::abs(d.r - expected) < 1e-14);

  CHECK_THROWS_AS(star_smatrix(make_delta(1.0), 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(star_smatrix(make_perm_invariant(1.0, 2.0), 3, 1.0),
                  std::domain_error);
}

TEST_CASE("unitarity on a log grid of momenta") {
  const std::vector<VertexCoupling> couplings = {
      make_delta(0.0),         make_delta(1.3),        make_delta(-2.1),
      make_delta_prime(0.7),   make_delta_prime(-1.1), make_delta_prime_s(0.0),
      make_delta_prime_s(2.5), make_delta_prime_s(-0.4)};
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n)
    for (const auto& c : couplings)
      for (int i = 0; i < 60; ++i) {
        const double k = 1e-2 * std::pow(10.0, 5.0 * i / 59.0);
        worst = std::max(worst, unitarity_defect(star_smatrix(c, n, k)));
      }
  CHECK(worst < 1e-10);
}

TEST_CASE("scattering solutions satisfy their boundary conditions") {
  const std::vector<VertexCoupling> couplings = {
      make_delta(1.5), make_delta(-0.7), make_delta_prime(0.9),
      make_delta_prime_s(-2.0), make_delta_prime_s(3.0)};
  for (int n : {2, 3, 5}) {
    for (const auto& c : couplings) {
      for (double k : {0.3, 1.0, 7.7}) {
        const auto s = star_smatrix(c, n, k);
        std::vector<complexd> f, fp;
        assemble_scattering_data(s, &f, &fp);
        for (const auto& r : bc_residual(c, n, f, fp))
          CHECK(std::abs(r) < 1e-10);
      }
    }
  }
}

TEST_CASE("bound-state energies sit at poles of the analytic continuation") {
  // k -> i kappa turns the S-matrix denominator into a real function whose
  // zero marks the bound state.
  for (int n : {2, 4}) {
    const double c = -3.0;
    const double kappa = std::sqrt(-bound_states(make_delta(c), n)[0].energy);
    CHECK(std::abs(-kappa * n - c) < 1e-10);

    const double C = 1.7;
    const double kdp = std::sqrt(-bound_states(make_delta_prime(C), n)[0].energy);
    CHECK(std::abs(n * (1.0 - kdp * C)) < 1e-10);

    const double D = -2.3;
    const double kds = std::sqrt(-bound_states(make_delta_prime_s(D), n)[0].energy);
    CHECK(std::abs(n + kds * D) < 1e-10);
  }
}

TEST_CASE("two-link symmetrized coupling reproduces the line formulas") {
  const double D = 1.9;
  for (double k : {0.2, 1.0, 14.0}) {
    const auto s = star_smatrix(make_delta_prime_s(D), 2, k);
    const complexd den(2.0, -k * D);
    CHECK(std::abs(s.r - complexd(0.0, -k * D) / den) < 1e-14);
    CHECK(std::abs(s.t - (-2.0) / den) < 1e-14);
  }
}

TEST_CASE("high-energy reflection of the general coupling") {
  // Neumann decoupling: r -> 1 as k grows.
  CHECK(std::abs(perm_reflection_asymptotic(1.0, 2.0, 3, 1e8) - 1.0) < 1e-7);

  const complexd r = perm_reflection_asymptotic(0.0, 1.0, 3, 10.0);
  // direct substitution: (1 - A/B) = 1, A + 2B = 2
  const complexd expect = complexd(1.0, 10.0 * 2.0) / complexd(-1.0, 10.0 * 2.0);
  CHECK(std::abs(r - expect) < 1e-14);

  CHECK(std::abs(perm_reflection_asymptotic(1.0, 2.0, 2, 5.0)) <= 1.0 + 1e-12);

  CHECK_THROWS_AS(perm_reflection_asymptotic(1.0, 0.0, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(perm_reflection_asymptotic(2.0, 2.0, 3, 1.0), std::domain_error);
}

TEST_CASE("boundary-condition residuals") {
  const std::vector<complexd> ones{1.0, 1.0, 1.0};
  const std::vector<complexd> balanced{1.0, -2.0, 1.0};
  for (const auto& r : bc_residual(make_delta(0.0), 3, ones, balanced))
    CHECK(std::abs(r) < 1e-15);

  const double D = 0.7;
  const std::vector<complexd> f2{1.0, -1.0 + D};
  const std::vector<complexd> fp2{1.0, 1.0};
  for (const auto& r : bc_residual(make_delta_prime_s(D), 2, f2, fp2))
    CHECK(std::abs(r) < 1e-15);

  const auto res = bc_residual(make_delta(1.0), 2, {1.0, 2.0}, {0.0, 0.0});
  CHECK(std::abs(res[0]) > 0.5);  // continuity violated

  // permutation-invariant conditions hold for data built from them
  const double A = 0.4, B = -0.3;
  std::vector<complexd> fp{0.1, 0.2, 0.3};
  std::vector<complexd> f(3);
  for (int j = 0; j < 3; ++j) {
    complexd sum = 0.0;
    for (int l = 0; l < 3; ++l)
      if (l != j) sum += fp[l];
    f[j] = A * fp[j] + B * sum;
  }
  for (const auto& r : bc_residual(make_perm_invariant(A, B), 3, f, fp))
    CHECK(std::abs(r) < 1e-15);

  CHECK_THROWS_AS(bc_residual(make_delta(0.0), 3, f2, fp2), std::invalid_argument);
}
