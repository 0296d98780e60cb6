#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qg/dd.hpp"
#include "qg/diophantine.hpp"

using namespace qg;
using doctest::Approx;

TEST_CASE("double-double arithmetic basics") {
  const Dd five(5.0);
  const Dd r = dd_sqrt(five);
  const Dd back = r * r - five;
  CHECK(std::abs(to_double(back)) < 1e-30);

  CHECK(to_double(dd_floor(Dd(2.7))) == 2.0);
  CHECK(to_double(dd_floor(Dd(-2.7))) == -3.0);
  CHECK(to_double(dd_floor(Dd(3.0, -1e-25))) == 2.0);

  const Dd parsed = dd_parse_decimal("0.75");
  CHECK(parsed == Dd(0.75));
  const Dd sci = dd_parse_decimal("1.5e2");
  CHECK(to_double(sci) == 150.0);
  CHECK_THROWS_AS(dd_parse_decimal("abc"), std::invalid_argument);

  // golden mean solves x^2 = x + 1 to double-double accuracy
  const Dd phi = dd_golden_mean();
  CHECK(std::abs(to_double(phi * phi - phi - Dd(1.0))) < 1e-30);
}

TEST_CASE("golden mean expands to all ones") {
  const auto cf = cf_expand(dd_golden_mean(), 30);
  CHECK(cf.a0 == 1);
  REQUIRE(cf.quotients.size() == 30);
  for (auto a : cf.quotients) CHECK(a == 1);
  CHECK_FALSE(cf.exact);
}

TEST_CASE("rational expansions terminate in canonical form") {
  const auto cf = cf_expand(Dd(0.75), 16);
  CHECK(cf.a0 == 0);
  REQUIRE(cf.quotients.size() == 2);
  CHECK(cf.quotients[0] == 1);
  CHECK(cf.quotients[1] == 3);

  const auto ratio = cf_from_ratio(3, 7, 16);
  CHECK(ratio.exact);
  CHECK(ratio.a0 == 0);
  REQUIRE(ratio.quotients.size() == 2);
  CHECK(ratio.quotients[0] == 2);
  CHECK(ratio.quotients[1] == 3);
  CHECK(ratio.quotients.back() != 1);  // canonical: never ends in 1

  const auto whole = cf_from_ratio(5, 1, 8);
  CHECK(whole.a0 == 5);
  CHECK(whole.quotients.empty());
}

TEST_CASE("square root of two") {
  const auto cf = cf_expand(dd_sqrt(Dd(2.0)), 20);
  CHECK(cf.a0 == 1);
  for (auto a : cf.quotients) CHECK(a == 2);

  // reconstruct from the 20 quotients: the truncation error at this depth is
  // far below 1e-12 relative
  double x = static_cast<double>(cf.quotients.back());
  for (int i = static_cast<int>(cf.quotients.size()) - 2; i >= 0; --i)
    x = static_cast<double>(cf.quotients[i]) + 1.0 / x;
  x = static_cast<double>(cf.a0) + 1.0 / x;
  CHECK(x == Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("convergents obey the recurrence and the determinant identity") {
  const auto golden = convergents(cf_expand(dd_golden_mean(), 10), 5);
  const std::vector<std::pair<long long, long long>> expect{
      {1, 1}, {2, 1}, {3, 2}, {5, 3}, {8, 5}};
  REQUIRE(golden.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(golden[i].p == expect[i].first);
    CHECK(golden[i].q == expect[i].second);
  }

  const auto ratio = convergents(cf_from_ratio(3, 4, 8), 3);
  CHECK(ratio[0].p == 0);
  CHECK(ratio[1].p == 1);
  CHECK(ratio[1].q == 1);
  CHECK(ratio[2].p == 3);
  CHECK(ratio[2].q == 4);

  // |p_i q_{i-1} - p_{i-1} q_i| = 1 for every consecutive pair
  const auto sqrt3 = convergents(cf_expand(dd_sqrt(Dd(3.0)), 18), 18);
  for (std::size_t i = 1; i < sqrt3.size(); ++i) {
    const long long det =
        sqrt3[i].p * sqrt3[i - 1].q - sqrt3[i - 1].p * sqrt3[i].q;
    CHECK(std::abs(det) == 1);
  }

  CHECK_THROWS_AS(convergents(cf_from_ratio(3, 4, 8), 9), std::invalid_argument);
}

TEST_CASE("convergents alternate around the target and approximate well") {
  const Dd theta = dd_sqrt(Dd(7.0));
  const double t = to_double(theta);
  const auto convs = convergents(cf_expand(theta, 20), 20);
  int below_hurwitz = 0;
  for (std::size_t i = 0; i < convs.size(); ++i) {
    const double value = static_cast<double>(convs[i].p) / convs[i].q;
    const double err = t - value;
    CHECK(((i % 2 == 0) ? err > 0.0 : err < 0.0));  // below, above, below, ...
    const double q = static_cast<double>(convs[i].q);
    CHECK(std::abs(err) < 1.0 / (q * q));
    if (std::abs(err) < 1.0 / (std::sqrt(5.0) * q * q)) ++below_hurwitz;
  }
  // at least one of any three consecutive convergents beats the bound
  CHECK(below_hurwitz >= static_cast<int>(convs.size()) / 3);
}

TEST_CASE("norm distance identities") {
  for (double x : {0.1, 0.499, 0.5, 0.731, 3.25}) {
    const double d = dist_to_nearest_int(Dd(x));
    CHECK(d >= 0.0);
    CHECK(d <= 0.5);
    CHECK(dist_to_nearest_int(Dd(-x)) == d);
    CHECK(dist_to_nearest_int(Dd(x) + Dd(1.0)) == d);  // shift done exactly
  }
  CHECK(dist_to_nearest_int(Dd(0.5)) == 0.5);
  CHECK(dist_to_nearest_int(Dd(2.0)) == 0.0);
}

TEST_CASE("approximation quality of the golden mean") {
  const auto aq = approx_quality(dd_golden_mean(), 30);
  CHECK_FALSE(aq.rational);
  REQUIRE(aq.qualities.size() >= 25);
  // q || q theta || tends to 1/sqrt(5) from both sides; the global minimum
  // over all convergents is ||theta|| = 2 - phi at q = 1
  CHECK(aq.min_quality == Approx(2.0 - to_double(dd_golden_mean())).epsilon(1e-9));
  const double limit = 1.0 / std::sqrt(5.0);
  CHECK(aq.qualities.back() == Approx(limit).epsilon(0.01));
  CHECK(aq.qualities[aq.qualities.size() - 2] == Approx(limit).epsilon(0.01));
}

TEST_CASE("approximation quality flags rationals and bounds sqrt(2)") {
  // 0.5 terminates exactly even in floating arithmetic; a generic decimal
  // like 0.75 is only rational to working precision and keeps its quotients
  // with the inexact flag.
  const auto rational = approx_quality(Dd(0.5), 10);
  CHECK(rational.rational);
  CHECK(rational.min_quality == 0.0);
  const auto near = cf_expand(Dd(0.75), 10);
  CHECK_FALSE(near.exact);
  REQUIRE(near.quotients.size() == 2);
  CHECK(near.quotients[0] == 1);
  CHECK(near.quotients[1] == 3);

  const auto sqrt2 = approx_quality(dd_sqrt(Dd(2.0)), 20);
  CHECK(sqrt2.min_quality > 0.2);
}

TEST_CASE("theta and 1/theta share the asymptotic quality floor") {
  // Compared over convergents with q >= 2: the q = 1 entry is ||theta||
  // itself, which is not an approximation-rate statement.
  const auto tail_min = [](const ApproxQuality& aq) {
    double m = 1e300;
    for (std::size_t i = 0; i < aq.convs.size(); ++i)
      if (aq.convs[i].q >= 2) m = std::min(m, aq.qualities[i]);
    return m;
  };
  for (const Dd& theta : {dd_sqrt(Dd(2.0)), dd_golden_mean(), dd_sqrt(Dd(7.0))}) {
    const auto direct = approx_quality(theta, 24);
    const auto inverse = approx_quality(Dd(1.0) / theta, 24);
    const double a = tail_min(direct), b = tail_min(inverse);
    CHECK(std::abs(a - b) / std::max(a, b) < 0.10);
  }
}

TEST_CASE("from-below approximants with the scaled-error bound") {
  const auto hs = hurwitz_sequence(dd_golden_mean(), 5);
  CHECK(hs.complete);
  REQUIRE(hs.members.size() == 5);
  // Fibonacci pairs; every golden-mean from-below convergent sits slightly
  // above 1/sqrt(5), so the 1e-6 slack first admits q = 610.
  CHECK(hs.members[0].p == 987);
  CHECK(hs.members[0].q == 610);
  CHECK(hs.members[1].q == 1597);

  const Dd phi = dd_golden_mean();
  const double bound = (1.0 + 1e-6) / std::sqrt(5.0);
  double prev_frac = 1.0;
  for (const auto& m : hs.members) {
    const Dd err = dd_from_int(m.q) * phi - dd_from_int(m.p);
    CHECK(err > Dd(0.0));  // below theta
    CHECK(static_cast<double>(m.q) * to_double(err) < bound);
    const double frac = to_double(err);  // {q theta} for from-below members
    CHECK(frac < prev_frac);             // -> 0 along the sequence
    prev_frac = frac;
  }

  CHECK_THROWS_AS(hurwitz_sequence(Dd(0.5), 3), std::domain_error);
  // rational to working precision only: short list, flagged incomplete
  const auto near = hurwitz_sequence(Dd(0.75), 3);
  CHECK_FALSE(near.complete);
  CHECK(near.members.empty());
}

TEST_CASE("rapidly growing quotients admit much better approximants") {
  // theta = [0; 1, 10, 100, 1000, ...]: scaled errors fall well below the
  // golden floor along the sequence.
  Dd theta(0.0);
  {
    // build from the tail: [..., 10000]
    Dd x(10000.0);
    for (double a : {1000.0, 100.0, 10.0, 1.0}) x = Dd(a) + Dd(1.0) / x;
    theta = Dd(0.0) + Dd(1.0) / x;
  }
  const auto hs = hurwitz_sequence(theta, 3);
  REQUIRE(hs.members.size() == 3);
  double last = 1.0;
  for (const auto& m : hs.members) {
    const Dd err = dd_from_int(m.q) * theta - dd_from_int(m.p);
    last = static_cast<double>(m.q) * to_double(err);
  }
  CHECK(last < 0.01);
}
