#include <doctest.h>

#include <utility>
#include <vector>

#include "cograd/estimator.hpp"
#include "test_util.hpp"

using cograd::Rational;

namespace {

cograd::ExactSample exact_sample(std::initializer_list<long long> xs,
                                 std::initializer_list<Rational> ys) {
  cograd::Vector<Rational> x(static_cast<int>(xs.size())), y(static_cast<int>(ys.size()));
  int i = 0;
  for (long long v : xs) x[i++] = Rational(v);
  i = 0;
  for (const Rational& v : ys) y[i++] = v;
  return cograd::make_sample<Rational>(std::move(x), std::move(y));
}

}  // namespace

TEST_CASE("worked sample estimates the unit slope") {
  const auto step = cograd::build_step_function<Rational>(testutil::worked_sample_exact());
  const auto est = cograd::point_estimate<Rational>(step);
  CHECK(est.beta_tilde == Rational(1));
  CHECK_FALSE(est.zero_plateau.has_value());

  const auto fast = cograd::point_estimate_fast<Rational>(testutil::worked_sample_exact());
  CHECK(fast.beta_tilde == Rational(1));
}

TEST_CASE("two points: the estimate is the connecting slope") {
  const auto s = exact_sample({1, 2}, {Rational(2), Rational(5)});
  const auto est = cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(s));
  CHECK(est.beta_tilde == Rational(3));
  CHECK_FALSE(est.zero_plateau.has_value());
}

TEST_CASE("sign change at a breakpoint yields that breakpoint, no plateau") {
  // y = (0, 1, 1, 0) on x = 1..4: the index jumps 1/4 -> -1/4 at b = 0.
  const auto s = exact_sample({1, 2, 3, 4}, {Rational(0), Rational(1), Rational(1), Rational(0)});
  const auto step = cograd::build_step_function<Rational>(s);
  const auto est = cograd::point_estimate<Rational>(step);
  CHECK(est.beta_tilde == Rational(0));
  CHECK_FALSE(est.zero_plateau.has_value());
  CHECK(cograd::evaluate<Rational>(step, Rational(-1, 4)) == Rational(1, 4));
  CHECK(cograd::evaluate<Rational>(step, Rational(0)) == Rational(-1, 4));
}

TEST_CASE("a zero plateau is reported with its midpoint") {
  // y = (3, 1, 4, 2) on x = 1..4: G == 0 exactly on [-1/3, 1/2).
  const auto s = exact_sample({1, 2, 3, 4}, {Rational(3), Rational(1), Rational(4), Rational(2)});
  const auto step = cograd::build_step_function<Rational>(s);
  const auto est = cograd::point_estimate<Rational>(step);
  REQUIRE(est.zero_plateau.has_value());
  CHECK(est.zero_plateau->first == Rational(-1, 3));
  CHECK(est.zero_plateau->second == Rational(1, 2));
  CHECK(est.beta_tilde == Rational(1, 12));
  CHECK(cograd::evaluate<Rational>(step, Rational(0)) == Rational(0));

  const auto fast = cograd::point_estimate_fast<Rational>(s);
  CHECK(fast.beta_tilde == est.beta_tilde);
  REQUIRE(fast.zero_plateau.has_value());
  CHECK(fast.zero_plateau->first == est.zero_plateau->first);
  CHECK(fast.zero_plateau->second == est.zero_plateau->second);
}

TEST_CASE("ci_bounds inverts the acceptance region on the worked sample") {
  const auto step = cograd::build_step_function<Rational>(testutil::worked_sample_exact());

  const auto full = cograd::ci_bounds<Rational>(step, Rational(1));
  CHECK(full.first == Rational(1, 2));
  CHECK(full.second == Rational(3, 2));

  // G* = 3/4 equals an interval value; "strictly below" excludes that
  // interval on the left, so the lower bound tightens to 1.
  const auto mid = cograd::ci_bounds<Rational>(step, Rational(3, 4));
  CHECK(mid.first == Rational(1));
  CHECK(mid.second == Rational(3, 2));

  const auto half = cograd::ci_bounds<Rational>(step, Rational(1, 2));
  CHECK(half.first == Rational(1));
  CHECK(half.second == Rational(5, 4));
}

TEST_CASE("ci_bounds validates the critical value") {
  const auto step = cograd::build_step_function<Rational>(testutil::worked_sample_exact());
  CHECK_THROWS_AS(cograd::ci_bounds<Rational>(step, Rational(0)), cograd::DegenerateLevel);
  CHECK_THROWS_AS(cograd::ci_bounds<Rational>(step, Rational(-1, 2)), cograd::DegenerateLevel);
  CHECK_THROWS_AS(cograd::ci_bounds<Rational>(step, Rational(3, 2)), cograd::DegenerateLevel);
}

TEST_CASE("intervals sandwich the estimate and nest as G* grows") {
  const std::vector<Rational> levels = {Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                        Rational(1)};
  for (std::uint64_t index = 0; index < 120; ++index) {
    const auto rs = testutil::random_sample(21, index, 20);
    const auto step = cograd::build_step_function<Rational>(rs.exact);
    const auto est = cograd::point_estimate<Rational>(step);

    std::pair<Rational, Rational> prev;
    bool have_prev = false;
    for (const Rational& g : levels) {
      const auto bounds = cograd::ci_bounds<Rational>(step, g);
      CHECK(bounds.first <= est.beta_tilde);
      CHECK(est.beta_tilde <= bounds.second);
      if (have_prev) {
        CHECK(bounds.first <= prev.first);
        CHECK(prev.second <= bounds.second);
      }
      prev = bounds;
      have_prev = true;
    }
  }
}

TEST_CASE("the estimator is equivariant under affine shifts of y") {
  const Rational shift(7, 3);
  const Rational tilt(-2);
  for (std::uint64_t index = 0; index < 80; ++index) {
    const auto rs = testutil::random_sample(22, index, 15);
    const auto base =
        cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(rs.exact));

    cograd::ExactSample moved = rs.exact;
    for (int i = 0; i < moved.size(); ++i) {
      moved.y[i] = moved.y[i] + shift + tilt * moved.x[i];
    }
    const auto shifted =
        cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(moved));
    CHECK(shifted.beta_tilde == base.beta_tilde + tilt);
  }
}

TEST_CASE("the estimator is antisymmetric in y") {
  for (std::uint64_t index = 0; index < 80; ++index) {
    const auto rs = testutil::random_sample(23, index, 15);
    const auto base =
        cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(rs.exact));

    cograd::ExactSample neg = rs.exact;
    for (int i = 0; i < neg.size(); ++i) neg.y[i] = -neg.y[i];
    const auto mirrored =
        cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(neg));
    CHECK(mirrored.beta_tilde == -base.beta_tilde);
  }
}

TEST_CASE("point_estimate_fast agrees with the full step path") {
  for (std::uint64_t index = 0; index < 150; ++index) {
    const auto rs = testutil::random_sample(24, index, 25);
    const auto full =
        cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(rs.exact));
    const auto fast = cograd::point_estimate_fast<Rational>(rs.exact);
    CHECK(full.beta_tilde == fast.beta_tilde);
    CHECK(full.zero_plateau.has_value() == fast.zero_plateau.has_value());
    if (full.zero_plateau) {
      CHECK(full.zero_plateau->first == fast.zero_plateau->first);
      CHECK(full.zero_plateau->second == fast.zero_plateau->second);
    }

    const auto full_d =
        cograd::point_estimate<double>(cograd::build_step_function<double>(rs.real));
    const auto fast_d = cograd::point_estimate_fast<double>(rs.real);
    CHECK(full_d.beta_tilde == fast_d.beta_tilde);
  }
}

TEST_CASE("confidence_interval uses the exact null within the ceiling") {
  const auto ci = cograd::confidence_interval<Rational>(testutil::worked_sample_exact(), 0.92);
  CHECK(ci.lower == Rational(1, 2));
  CHECK(ci.upper == Rational(3, 2));
  CHECK(ci.g_star == Rational(1));
  REQUIRE(ci.achieved_level.has_value());
  CHECK(*ci.achieved_level == Rational(11, 12));
  CHECK(ci.source == cograd::NullSource::exact);
  CHECK(ci.target_level == 0.92);
}

TEST_CASE("confidence_interval beyond the ceiling") {
  const auto s = exact_sample({1, 2, 3, 4, 5, 6, 7, 8},
                              {Rational(3), Rational(1), Rational(4), Rational(2), Rational(9),
                               Rational(5), Rational(13, 2), Rational(8)});

  cograd::NullOptions forbid;
  forbid.ceiling = 5;
  forbid.fallback = cograd::NullFallback::forbid;
  CHECK_THROWS_AS(cograd::confidence_interval<Rational>(s, 0.9, forbid), cograd::NullTooLarge);

  cograd::NullOptions approx;
  approx.ceiling = 5;
  approx.fallback = cograd::NullFallback::asymptotic_normal;
  const auto ci = cograd::confidence_interval<Rational>(s, 0.9, approx);
  CHECK(ci.source == cograd::NullSource::asymptotic_normal);
  CHECK_FALSE(ci.achieved_level.has_value());
  CHECK(Rational(0) < ci.g_star);
  CHECK(ci.g_star <= Rational(1));

  const auto est = cograd::point_estimate<Rational>(cograd::build_step_function<Rational>(s));
  CHECK(ci.lower <= est.beta_tilde);
  CHECK(est.beta_tilde <= ci.upper);

  // Within the default ceiling the same sample gets the exact null.
  const auto exact_ci = cograd::confidence_interval<Rational>(s, 0.9);
  CHECK(exact_ci.source == cograd::NullSource::exact);
  REQUIRE(exact_ci.achieved_level.has_value());
  CHECK(*exact_ci.achieved_level == Rational(109, 120));
  CHECK(exact_ci.g_star == Rational(9, 16));
}

TEST_CASE("confidence_interval validates the level") {
  CHECK_THROWS_AS(cograd::confidence_interval<Rational>(testutil::worked_sample_exact(), 0.0),
                  cograd::DegenerateLevel);
  CHECK_THROWS_AS(cograd::confidence_interval<Rational>(testutil::worked_sample_exact(), 1.0),
                  cograd::DegenerateLevel);
  CHECK_THROWS_AS(cograd::confidence_interval<Rational>(testutil::worked_sample_exact(), -0.5),
                  cograd::DegenerateLevel);
}
