#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cograd/types.hpp"

namespace cograd {

/// Distribution of the cograduation index under indifference (all rank
/// permutations equally likely), either by full enumeration or by Monte
/// Carlo sampling of permutations.
struct NullDistribution {
  enum class Source { exact, monte_carlo };

  int n = 0;
  std::vector<Rational> support;   // ascending
  std::vector<long long> counts;   // aligned with support
  long long total = 0;             // n! for exact, reps for monte_carlo
  Source source = Source::exact;
  std::uint64_t seed = 0;          // monte_carlo only

  Rational mass(std::size_t k) const { return Rational(counts[k], total); }
};

/// Absolute slack applied when comparing an achieved coverage against the
/// requested level.  Published levels are rounded to two decimals while the
/// discrete null produces levels like 11/12 = 0.9166...; half of one percent
/// absorbs exactly that rounding without admitting a genuinely lower tier.
inline constexpr double kLevelSlack = 5e-3;

/// Full enumeration of all n! rank permutations.  Throws NullTooLarge beyond
/// the ceiling.
NullDistribution exact_null(int n, int ceiling = kDefaultNullCeiling);

/// Empirical null from uniformly random permutations; deterministic for a
/// fixed seed.  Requires reps >= 1000.
NullDistribution monte_carlo_null(int n, long long reps, std::uint64_t seed);

/// P{ -g < G < g } as an exact fraction of the distribution's total count.
Rational coverage_strict(const NullDistribution& dist, const Rational& g);

/// P{ -g <= G <= g }.
Rational coverage_inclusive(const NullDistribution& dist, const Rational& g);

/// Smallest critical value G* in support (union {1}) whose strict coverage
/// reaches the target level (minus kLevelSlack), paired with the exact
/// achieved level; LevelUnattainable if even G* = 1 falls short.
std::pair<Rational, Rational> critical_value(const NullDistribution& dist, double target_level);

/// Moments in floating point (diagnostics and Monte Carlo checks).
double null_mean(const NullDistribution& dist);
double null_variance(const NullDistribution& dist);

}  // namespace cograd
