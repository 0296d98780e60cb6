#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qg/analysis.hpp"
#include "qg/dd.hpp"
#include "qg/diophantine.hpp"
#include "qg/errors.hpp"

using namespace qg;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
}  // namespace

TEST_CASE("band-conspiracy enhancement factors") {
  CHECK(enhancement(2.0).g == Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(enhancement(1.0).e == Approx((3.0 + std::sqrt(5.0)) / 4.0).epsilon(1e-14));
  CHECK(enhancement(1e9).e == Approx(1.0).epsilon(1e-4));
  CHECK(enhancement(1e-9).e == Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(enhancement(0.0), std::invalid_argument);

  // g > 1 for every finite theta; e peaks at 4/3, attained at theta = 2
  double grid_max = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double theta = 0.05 + (20.0 - 0.05) * i / 2000.0;
    const auto f = enhancement(theta);
    CHECK(f.g > 1.0);
    CHECK(f.e <= 4.0 / 3.0 + 1e-12);
    grid_max = std::max(grid_max, f.e);
  }
  CHECK(enhancement(2.0).e == Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(grid_max <= 4.0 / 3.0 + 1e-9);
}

TEST_CASE("critical coupling of the golden-mean lattice") {
  const double target = kPi * kPi / std::sqrt(5.0) / kPhi;
  const double cc = critical_coupling(kPhi, 1.0, kPhi, std::pow(200.0 * kPi, 2));
  CHECK(cc == Approx(target).epsilon(0.02));
  CHECK(cc >= target * (1.0 - 1e-4));  // approaches from above
}

TEST_CASE("rational ratios have zero critical coupling") {
  CHECK(critical_coupling(1.0, 1.0, 1.0, 1000.0) == Approx(0.0).scale(1.0));
  CHECK(critical_coupling(1.5, 1.0, 1.5, 1000.0) == Approx(0.0).scale(1.0));
}

TEST_CASE("critical coupling is non-increasing in the cutoff") {
  double prev = 1e300;
  for (double emax : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double cc = critical_coupling(kPhi, 1.0, kPhi, emax);
    CHECK(cc <= prev + 1e-12);
    prev = cc;
  }
  CHECK_THROWS_AS(critical_coupling(kPhi, 1.0, kPhi, 1e-6), numerical_error);
}

TEST_CASE("critical values shrink along the from-below approximants") {
  // Unbounded partial quotients push 2 k F_plus(k) at the matching lattice
  // points toward zero, opening gaps for arbitrarily weak coupling.
  Dd theta(0.0);
  {
    Dd x(10000.0);
    for (double a : {1000.0, 100.0, 10.0, 1.0}) x = Dd(a) + Dd(1.0) / x;
    theta = Dd(0.0) + Dd(1.0) / x;
  }
  const auto hs = hurwitz_sequence(theta, 3);
  REQUIRE(hs.members.size() == 3);
  const double th = to_double(theta);
  double prev = 1e300;
  for (const auto& m : hs.members) {
    const double k = kPi * static_cast<double>(m.q);  // ell1 = 1
    const double frac = static_cast<double>(m.q) * th - static_cast<double>(m.p);
    const double value = 2.0 * k * std::tan(0.5 * kPi * frac);
    CHECK(value < prev);
    prev = value;
  }
  CHECK(prev < 0.5);
}

TEST_CASE("proposition report for a repulsive delta lattice") {
  const auto lat = make_lattice(1.0, 1.0, make_delta(2.0));
  const auto rep = verify_propositions(lat, 1000.0);
  CHECK(rep.gap_count > 0);
  CHECK(rep.edge_quantization_ok);
  CHECK(rep.threshold_sign_ok);
  CHECK(rep.kp_containment_ok);
  CHECK(rep.deep_negative_ok);
  CHECK(rep.bound_violations.empty());
  // widths above the asymptotic threshold approach 2 c / (l1 + l2) = 2
  REQUIRE(!rep.gap_widths.empty());
  CHECK(rep.gap_widths.back() == Approx(2.0).epsilon(0.1));
}

TEST_CASE("proposition report for a symmetrized lattice") {
  const auto lat = make_lattice(1.0, 1.0, make_delta_prime_s(2.0));
  const auto rep = verify_propositions(lat, 1000.0);
  CHECK(rep.edge_quantization_ok);
  CHECK(rep.threshold_sign_ok);
  CHECK(rep.bound_violations.empty());
  CHECK(rep.kp_containment_ok);
}

TEST_CASE("free lattice reports no gaps") {
  const auto rep = verify_propositions(make_lattice(1.0, 1.3, make_delta(0.0)), 500.0);
  CHECK(rep.gap_count == 0);
  CHECK(rep.threshold_sign_ok);
}

TEST_CASE("deep negative structure is checked") {
  const auto rep = verify_propositions(make_lattice(1.0, 1.0, make_delta(-10.0)), 200.0);
  CHECK(rep.deep_negative_ok);
  CHECK(rep.threshold_sign_ok);
}

TEST_CASE("gap census over coupling values") {
  const auto rows =
      gap_census(1.0, 1.0, {0.01, 0.5, 1.0, 2.0, 4.0}, 10000.0);
  REQUIRE(rows.size() == 5);
  // rational ratio: gaps for arbitrarily small coupling
  CHECK(rows[0].gap_count >= 1);
  // monotone in the coupling strength
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].gap_count >= rows[i - 1].gap_count);
  for (const auto& r : rows)
    if (r.gap_count > 0) REQUIRE(r.first_gap_lo.has_value());

  CHECK_THROWS_AS(gap_census(1.0, 1.0, {}, 100.0), std::invalid_argument);
}

TEST_CASE("golden-mean census around the threshold") {
  const double e_max = std::pow(40.0 * kPi, 2);
  const double critical = kPi * kPi / std::sqrt(5.0);  // for |c| L
  const auto rows = gap_census(kPhi, std::sqrt(kPhi),
                               {0.9 * critical / kPhi, 1.1 * critical / kPhi},
                               e_max);
  CHECK(rows[0].gap_count == 0);
  CHECK(rows[1].gap_count >= 1);
}
