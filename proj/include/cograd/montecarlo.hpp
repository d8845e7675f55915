#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "cograd/asymptotics.hpp"
#include "cograd/distributions.hpp"
#include "cograd/types.hpp"

namespace cograd {

/// Counter-based random stream: every draw is a stateless mix of (key,
/// counter), and the key is derived from (seed, replication index).  Streams
/// for distinct replications are independent of scheduling, so simulations
/// reproduce bit-for-bit under any degree of parallelism, on any platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key), counter_(0) {}

  static CounterRng for_replication(std::uint64_t seed, std::uint64_t replication) {
    return CounterRng(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                          mix(replication + 0x243F6A8885A308D3ULL)));
  }

  std::uint64_t next() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform draw strictly inside (0, 1): (k + 1/2) / 2^53 over 53-bit k.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, range) by the multiply-shift reduction.
  std::uint64_t bounded(std::uint64_t range) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * range) >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Sum with a fixed halving tree, so the result is independent of how work
/// was scheduled.
double pairwise_sum(std::span<const double> values);

struct SimulationConfig {
  std::string model = "normal";
  std::string design = "linear";   // "linear", "geometric", or "geometric:<alpha>"
  int n = 0;
  long long reps = 0;
  double beta_true = 0.0;
  double alpha_true = 0.0;
  std::uint64_t seed = 0;
  bool compute_ci = false;
  std::optional<double> target_level;
  int threads = 1;
  bool full_step_path = false;     // force the full step-function estimator path
  int null_ceiling = kDefaultNullCeiling;
};

struct EstimatorStats {
  double mean = 0;
  double variance = 0;
  double bias = 0;
};

struct CoverageStats {
  double coverage = 0;         // fraction of intervals containing beta_true
  Rational g_star{0};
  Rational achieved_level{0};  // exact level the coverage is compared against
  double target_level = 0;
};

struct SimulationReport {
  int n = 0;
  long long reps = 0;
  std::uint64_t seed = 0;
  EstimatorStats beta_tilde;
  EstimatorStats beta_hat;
  EstimatorStats beta_star;
  double variance_ratio_tilde = 0;  // Var(beta_tilde) * 24 * T^2 * C^2, target 1
  double null_variance_scaled = 0;  // n * Var(G at the true slope), target 2/3
  std::optional<CoverageStats> ci;
  double runtime_seconds = 0;       // wall clock; the only field exempt from determinism
};

/// Seeded simulation: draws errors by inverse cdf, fits all three estimators
/// per replication, and aggregates with deterministic reductions.  All
/// report fields except runtime_seconds are pure functions of the config.
SimulationReport run_simulation(const SimulationConfig& config);

/// Fraction of replications whose confidence interval contains beta_true;
/// requires target_level and n within the exact-null ceiling.
double coverage_experiment(const SimulationConfig& config);

}  // namespace cograd
