#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cograd/ranks.hpp"
#include "test_util.hpp"

using cograd::GiniValue;
using cograd::IndexVector;
using cograd::Rational;

namespace {

IndexVector ranks_of(std::initializer_list<int> values) {
  IndexVector r(static_cast<int>(values.size()));
  int i = 0;
  for (int v : values) r[i++] = v;
  return r;
}

}  // namespace

TEST_CASE("gini_denominator follows the parity rule") {
  CHECK(cograd::gini_denominator(2) == 4);
  CHECK(cograd::gini_denominator(3) == 8);
  CHECK(cograd::gini_denominator(4) == 16);
  CHECK(cograd::gini_denominator(5) == 24);
  CHECK(cograd::gini_denominator(10) == 100);
  CHECK_THROWS_AS(cograd::gini_denominator(1), std::invalid_argument);
}

TEST_CASE("compute_ranks orders distinct values") {
  Eigen::VectorXd v(3);
  v << 0.4, 0.1, 0.9;
  const IndexVector r = cograd::compute_ranks<double>(v);
  CHECK(r[0] == 2);
  CHECK(r[1] == 1);
  CHECK(r[2] == 3);
}

TEST_CASE("compute_ranks detects ties") {
  Eigen::VectorXd v(3);
  v << 1.0, 2.0, 2.0;
  CHECK_THROWS_AS(cograd::compute_ranks<double>(v), cograd::TiedValues);

  Eigen::VectorXd w(2);
  w << 1.0, 1.0 + 1e-13;  // inside the relative tie tolerance
  CHECK_THROWS_AS(cograd::compute_ranks<double>(w), cograd::TiedValues);

  Eigen::VectorXd ok(2);
  ok << 1.0, 1.001;
  CHECK_NOTHROW(cograd::compute_ranks<double>(ok));

  cograd::Vector<Rational> e(2);
  e << Rational(1, 3), Rational(1, 3);
  CHECK_THROWS_AS(cograd::compute_ranks<Rational>(e), cograd::TiedValues);
}

TEST_CASE("gini_index on small permutations") {
  CHECK(cograd::gini_index(ranks_of({1, 2, 3})) == GiniValue{8, 8});    // identity -> 1
  CHECK(cograd::gini_index(ranks_of({3, 2, 1})) == GiniValue{-8, 8});   // reversal -> -1
  CHECK(cograd::gini_index(ranks_of({1, 3, 2})) == Rational(1, 2));
  CHECK(cograd::gini_index(ranks_of({2, 1, 3})) == Rational(1, 2));
  CHECK(cograd::gini_index(ranks_of({4, 1, 3, 2})) == Rational(-1, 4));
  CHECK(cograd::gini_index(ranks_of({1, 2})) == Rational(1));
  CHECK(cograd::gini_index(ranks_of({2, 1})) == Rational(-1));
}

TEST_CASE("gini_index keeps the unreduced denominator") {
  const GiniValue g = cograd::gini_index(ranks_of({1, 3, 2}));
  CHECK(g.num == 4);
  CHECK(g.den == 8);
  CHECK(g.reduced() == Rational(1, 2));
  CHECK(g.to_double() == 0.5);
}

TEST_CASE("gini_index rejects non-permutations") {
  CHECK_THROWS_AS(cograd::gini_index(ranks_of({1, 1, 3})), std::invalid_argument);
  CHECK_THROWS_AS(cograd::gini_index(ranks_of({0, 1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(cograd::gini_index(ranks_of({1, 2, 4})), std::invalid_argument);
  CHECK_THROWS_AS(cograd::gini_index(ranks_of({1})), std::invalid_argument);
}

TEST_CASE("permutation exhaustion: bounds, symmetry, and zero mean") {
  for (int n = 2; n <= 7; ++n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    Rational sum(0);
    long long count = 0;
    do {
      IndexVector r(n);
      for (int i = 0; i < n; ++i) r[i] = perm[i];
      const GiniValue g = cograd::gini_index(r);
      CHECK(g.den == cograd::gini_denominator(n));
      CHECK(cograd::abs(g.reduced()) <= Rational(1));

      // Reversing the ranks flips the sign.
      IndexVector rev(n);
      for (int i = 0; i < n; ++i) rev[i] = n + 1 - r[i];
      const GiniValue h = cograd::gini_index(rev);
      CHECK(h.num == -g.num);

      sum += g.reduced();
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(sum == Rational(0));
    long long factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    CHECK(count == factorial);
  }
}

TEST_CASE("gini_at reproduces the worked sample") {
  const auto s = testutil::worked_sample();
  CHECK(cograd::gini_at<double>(s, 0.0) == Rational(1));
  CHECK(cograd::gini_at<double>(s, 0.75) == Rational(3, 4));
  CHECK(cograd::gini_at<double>(s, 1.1) == Rational(-1, 4));
  CHECK(cograd::gini_at<double>(s, 1.3) == Rational(-1, 2));
  CHECK(cograd::gini_at<double>(s, 2.0) == Rational(-1));

  const auto e = testutil::worked_sample_exact();
  CHECK(cograd::gini_at<Rational>(e, Rational(0)) == Rational(1));
  CHECK(cograd::gini_at<Rational>(e, Rational(3, 4)) == Rational(3, 4));
  CHECK(cograd::gini_at<Rational>(e, Rational(11, 10)) == Rational(-1, 4));
  CHECK(cograd::gini_at<Rational>(e, Rational(2)) == Rational(-1));
}

TEST_CASE("gini_at signals breakpoints instead of guessing") {
  const auto s = testutil::worked_sample();
  CHECK_THROWS_AS(cograd::gini_at<double>(s, 1.0), cograd::BreakpointHit);
  CHECK_THROWS_AS(cograd::gini_at<double>(s, 0.5), cograd::BreakpointHit);
  const auto e = testutil::worked_sample_exact();
  CHECK_THROWS_AS(cograd::gini_at<Rational>(e, Rational(5, 4)), cograd::BreakpointHit);
}

TEST_CASE("gini_at agrees between exact and floating scalars") {
  for (std::uint64_t index = 0; index < 25; ++index) {
    const auto rs = testutil::random_sample(2024, index, 12);
    // Probe strictly between consecutive distinct pairwise slopes via thirds
    // of a small offset; simply use non-slope rational points.
    for (long long k = -3; k <= 3; ++k) {
      const Rational b(2 * k + 1, 7);  // odd/7 rarely collides with slopes
      try {
        const GiniValue exact = cograd::gini_at<Rational>(rs.exact, b);
        const GiniValue approx = cograd::gini_at<double>(rs.real, b.to_double());
        CHECK(exact == approx);
      } catch (const cograd::BreakpointHit&) {
        // Collision with a pairwise slope: both paths must agree on that too.
        CHECK_THROWS_AS(cograd::gini_at<double>(rs.real, b.to_double()), cograd::BreakpointHit);
      }
    }
  }
}
