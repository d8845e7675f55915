#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cograd/null_dist.hpp"

using cograd::NullDistribution;
using cograd::Rational;

TEST_CASE("exact null for n = 2") {
  const auto dist = cograd::exact_null(2);
  REQUIRE(dist.support.size() == 2);
  CHECK(dist.support[0] == Rational(-1));
  CHECK(dist.support[1] == Rational(1));
  CHECK(dist.counts == std::vector<long long>{1, 1});
  CHECK(dist.total == 2);
  CHECK(dist.source == NullDistribution::Source::exact);
}

TEST_CASE("exact null for n = 3") {
  const auto dist = cograd::exact_null(3);
  REQUIRE(dist.support.size() == 4);
  CHECK(dist.support[0] == Rational(-1));
  CHECK(dist.support[1] == Rational(-1, 2));
  CHECK(dist.support[2] == Rational(1, 2));
  CHECK(dist.support[3] == Rational(1));
  CHECK(dist.counts == std::vector<long long>{1, 2, 2, 1});
  CHECK(dist.total == 6);
  CHECK(dist.mass(0) == Rational(1, 6));
  CHECK(dist.mass(1) == Rational(1, 3));
}

TEST_CASE("exact null for n = 4") {
  const auto dist = cograd::exact_null(4);
  const std::vector<Rational> support = {Rational(-1), Rational(-3, 4), Rational(-1, 2),
                                         Rational(-1, 4), Rational(0),  Rational(1, 4),
                                         Rational(1, 2), Rational(3, 4), Rational(1)};
  REQUIRE(dist.support == support);
  CHECK(dist.counts == std::vector<long long>{1, 2, 2, 6, 2, 6, 2, 2, 1});
  CHECK(dist.total == 24);
}

TEST_CASE("tail probabilities of small exact nulls") {
  const auto four = cograd::exact_null(4);
  CHECK(cograd::coverage_strict(four, Rational(1, 2)) == Rational(7, 12));
  CHECK(cograd::coverage_strict(four, Rational(3, 4)) == Rational(3, 4));
  CHECK(cograd::coverage_strict(four, Rational(1)) == Rational(11, 12));
  CHECK(cograd::coverage_inclusive(four, Rational(3, 4)) == Rational(11, 12));
  CHECK(cograd::coverage_inclusive(four, Rational(1)) == Rational(1));

  const auto five = cograd::exact_null(5);
  CHECK(cograd::coverage_strict(five, Rational(1)) == Rational(59, 60));
}

TEST_CASE("exact null invariants for n = 2..7") {
  for (int n = 2; n <= 7; ++n) {
    const auto dist = cograd::exact_null(n);
    long long factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    CHECK(dist.total == factorial);

    long long count_sum = 0;
    Rational mean(0);
    for (std::size_t k = 0; k < dist.support.size(); ++k) {
      count_sum += dist.counts[k];
      mean += dist.support[k] * Rational(dist.counts[k]);
      CHECK(cograd::abs(dist.support[k]) <= Rational(1));
    }
    CHECK(count_sum == factorial);
    CHECK(mean == Rational(0));

    // Symmetric about zero, with single permutations at the extremes.
    const std::size_t m = dist.support.size();
    for (std::size_t k = 0; k < m; ++k) {
      CHECK(dist.support[k] == -dist.support[m - 1 - k]);
      CHECK(dist.counts[k] == dist.counts[m - 1 - k]);
    }
    CHECK(dist.support.front() == Rational(-1));
    CHECK(dist.support.back() == Rational(1));
    CHECK(dist.counts.front() == 1);
    CHECK(dist.counts.back() == 1);
    CHECK(std::abs(cograd::null_mean(dist)) < 1e-15);
    CHECK(cograd::null_variance(dist) > 0.0);
  }
}

TEST_CASE("coverage is monotone in the critical value") {
  const auto dist = cograd::exact_null(6);
  Rational prev(-1);
  Rational prev_cov(0);
  for (const Rational& g : dist.support) {
    if (g <= Rational(0)) continue;
    const Rational cov = cograd::coverage_strict(dist, g);
    CHECK(cov >= prev_cov);
    prev_cov = cov;
    prev = g;
  }
  CHECK(prev == Rational(1));
}

TEST_CASE("critical_value picks the smallest sufficient cutoff") {
  const auto four = cograd::exact_null(4);

  // Half coverage is already reached at G* = 1/2.
  const auto half = cograd::critical_value(four, 0.5);
  CHECK(half.first == Rational(1, 2));
  CHECK(half.second == Rational(7, 12));

  // 0.92 needs the widest region; 11/12 = 0.9166... is accepted because the
  // shortfall is within the published-level slack.
  const auto wide = cograd::critical_value(four, 0.92);
  CHECK(wide.first == Rational(1));
  CHECK(wide.second == Rational(11, 12));

  const auto three = cograd::critical_value(cograd::exact_null(3), 0.3);
  CHECK(three.first == Rational(1));
  CHECK(three.second == Rational(2, 3));
}

TEST_CASE("unattainable levels throw with the best achievable level attached") {
  const auto two = cograd::exact_null(2);
  try {
    cograd::critical_value(two, 0.9);
    FAIL("expected LevelUnattainable");
  } catch (const cograd::LevelUnattainable& e) {
    CHECK(e.max_attainable == Rational(0));  // P{|G| < 1} = 0 when n = 2
  }

  const auto four = cograd::exact_null(4);
  try {
    cograd::critical_value(four, 0.99);
    FAIL("expected LevelUnattainable");
  } catch (const cograd::LevelUnattainable& e) {
    CHECK(e.max_attainable == Rational(11, 12));
  }
}

TEST_CASE("enumeration ceiling") {
  CHECK_THROWS_AS(cograd::exact_null(11), cograd::NullTooLarge);
  CHECK_THROWS_AS(cograd::exact_null(8, /*ceiling=*/7), cograd::NullTooLarge);
  CHECK_THROWS_AS(cograd::exact_null(1), std::invalid_argument);
}

TEST_CASE("monte carlo null approximates the exact law") {
  const auto mc = cograd::monte_carlo_null(4, 100000, 12345);
  CHECK(mc.source == NullDistribution::Source::monte_carlo);
  CHECK(mc.total == 100000);
  CHECK(mc.seed == 12345);

  long long count_sum = 0;
  for (long long c : mc.counts) count_sum += c;
  CHECK(count_sum == 100000);

  // P{|G| <= 3/4} = 11/12 exactly; the simulated mass must land nearby.
  const double simulated = cograd::coverage_inclusive(mc, Rational(3, 4)).to_double();
  CHECK(std::abs(simulated - 11.0 / 12.0) < 0.01);
  CHECK(std::abs(cograd::null_mean(mc)) < 0.02);
}

TEST_CASE("monte carlo null on a size the exact path cannot reach") {
  const auto mc = cograd::monte_carlo_null(50, 20000, 1);
  CHECK(mc.n == 50);
  CHECK(std::abs(cograd::null_mean(mc)) < 0.02);
  // Every simulated value stays inside [-1, 1].
  CHECK(mc.support.front() >= Rational(-1));
  CHECK(mc.support.back() <= Rational(1));
}

TEST_CASE("monte carlo null is reproducible per seed") {
  const auto a = cograd::monte_carlo_null(6, 5000, 99);
  const auto b = cograd::monte_carlo_null(6, 5000, 99);
  CHECK(a.support == b.support);
  CHECK(a.counts == b.counts);

  const auto c = cograd::monte_carlo_null(6, 5000, 100);
  CHECK((a.support != c.support || a.counts != c.counts));
}

TEST_CASE("monte carlo null validates its replication count") {
  CHECK_THROWS_AS(cograd::monte_carlo_null(4, 999, 1), std::invalid_argument);
}
