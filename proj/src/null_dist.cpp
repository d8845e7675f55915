#include "cograd/null_dist.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>

#include "cograd/montecarlo.hpp"
#include "cograd/ranks.hpp"

namespace cograd {

namespace {

long long factorial(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// V - U for a permutation stored 0-based in `perm` (values 1..n).
long long v_minus_u(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  long long u = 0;
  long long v = 0;
  for (int i = 0; i < n; ++i) {
    const long long r = perm[i];
    u += std::llabs((i + 1) - r);
    v += std::llabs((n - i) - r);
  }
  return v - u;
}

NullDistribution from_diff_counts(int n, const std::map<long long, long long>& diff_counts,
                                  long long total, NullDistribution::Source source,
                                  std::uint64_t seed) {
  NullDistribution out;
  out.n = n;
  out.total = total;
  out.source = source;
  out.seed = seed;
  const long long d = gini_denominator(n);
  for (const auto& [diff, count] : diff_counts) {
    out.support.push_back(Rational(2 * diff, d));
    out.counts.push_back(count);
  }
  return out;
}

}  // namespace

NullDistribution exact_null(int n, int ceiling) {
  if (n < 2) throw std::invalid_argument("null distribution requires n >= 2");
  if (n > ceiling) {
    throw NullTooLarge("n = " + std::to_string(n) + " exceeds the enumeration ceiling of " +
                       std::to_string(ceiling) + " (" + std::to_string(n) +
                       "! permutations); use the Monte Carlo null instead");
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::map<long long, long long> diff_counts;
  do {
    ++diff_counts[v_minus_u(perm)];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return from_diff_counts(n, diff_counts, factorial(n), NullDistribution::Source::exact, 0);
}

NullDistribution monte_carlo_null(int n, long long reps, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("null distribution requires n >= 2");
  if (reps < 1000) throw std::invalid_argument("Monte Carlo null requires reps >= 1000");
  std::map<long long, long long> diff_counts;
  std::vector<int> perm(n);
  for (long long rep = 0; rep < reps; ++rep) {
    CounterRng rng = CounterRng::for_replication(seed, static_cast<std::uint64_t>(rep));
    std::iota(perm.begin(), perm.end(), 1);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[i], perm[j]);
    }
    ++diff_counts[v_minus_u(perm)];
  }
  return from_diff_counts(n, diff_counts, reps, NullDistribution::Source::monte_carlo, seed);
}

Rational coverage_strict(const NullDistribution& dist, const Rational& g) {
  long long covered = 0;
  for (std::size_t k = 0; k < dist.support.size(); ++k) {
    if (-g < dist.support[k] && dist.support[k] < g) covered += dist.counts[k];
  }
  return Rational(covered, dist.total);
}

Rational coverage_inclusive(const NullDistribution& dist, const Rational& g) {
  long long covered = 0;
  for (std::size_t k = 0; k < dist.support.size(); ++k) {
    if (-g <= dist.support[k] && dist.support[k] <= g) covered += dist.counts[k];
  }
  return Rational(covered, dist.total);
}

std::pair<Rational, Rational> critical_value(const NullDistribution& dist, double target_level) {
  if (!(target_level > 0.0 && target_level < 1.0)) {
    throw DegenerateLevel("target level must lie strictly between 0 and 1");
  }
  std::vector<Rational> candidates;
  for (const Rational& v : dist.support) {
    if (Rational(0) < v) candidates.push_back(v);
  }
  const Rational one(1);
  if (candidates.empty() || !(candidates.back() == one)) candidates.push_back(one);

  const double required = target_level - kLevelSlack;
  Rational best(0);
  for (const Rational& g : candidates) {
    const Rational level = coverage_strict(dist, g);
    if (level.to_double() >= required) return {g, level};
    best = level;  // coverage is nondecreasing in g, so the last value is the max
  }
  throw LevelUnattainable(best);
}

double null_mean(const NullDistribution& dist) {
  double acc = 0;
  for (std::size_t k = 0; k < dist.support.size(); ++k) {
    acc += dist.support[k].to_double() * static_cast<double>(dist.counts[k]);
  }
  return acc / static_cast<double>(dist.total);
}

double null_variance(const NullDistribution& dist) {
  const double mean = null_mean(dist);
  double acc = 0;
  for (std::size_t k = 0; k < dist.support.size(); ++k) {
    const double dev = dist.support[k].to_double() - mean;
    acc += dev * dev * static_cast<double>(dist.counts[k]);
  }
  return acc / static_cast<double>(dist.total);
}

}  // namespace cograd
