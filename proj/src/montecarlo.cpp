#include "cograd/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cograd/baselines.hpp"
#include "cograd/estimator.hpp"
#include "cograd/null_dist.hpp"
#include "cograd/ranks.hpp"
#include "cograd/step_function.hpp"

namespace cograd {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0;
    for (const double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

DesignSequence design_by_name(const std::string& name) {
  if (name == "linear") return linear_design();
  if (name == "geometric") return geometric_design();
  const std::string prefix = "geometric:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string arg = name.substr(prefix.size());
    std::size_t used = 0;
    const double alpha = std::stod(arg, &used);
    if (used != arg.size()) {
      throw std::invalid_argument("malformed design ratio \"" + arg + "\"");
    }
    return geometric_design(alpha);
  }
  throw std::invalid_argument("unknown design \"" + name +
                              "\"; expected linear, geometric, or geometric:<ratio>");
}

struct StatAccumulator {
  double mean = 0;
  double variance = 0;
};

StatAccumulator summarize(const std::vector<double>& values) {
  StatAccumulator out;
  const auto n = static_cast<double>(values.size());
  out.mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double d = values[k] - out.mean;
    sq[k] = d * d;
  }
  out.variance = pairwise_sum(sq) / (n - 1);
  return out;
}

EstimatorStats estimator_stats(const std::vector<double>& values, double truth) {
  const StatAccumulator acc = summarize(values);
  return EstimatorStats{acc.mean, acc.variance, acc.mean - truth};
}

}  // namespace

SimulationReport run_simulation(const SimulationConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  if (config.n < 2) throw std::invalid_argument("simulation needs n >= 2");
  if (config.reps < 100) throw std::invalid_argument("simulation needs reps >= 100");
  if (config.threads < 1) throw std::invalid_argument("simulation needs threads >= 1");
  const DistributionModel model = model_by_name(config.model);
  if (!model.quantile) {
    throw ModelNotSampleable("model \"" + config.model + "\" has no quantile function");
  }
  const DesignSequence design = design_by_name(config.design);

  const Eigen::VectorXd x = design.generate(config.n);
  for (int i = 1; i < config.n; ++i) {
    if (!(x[i - 1] < x[i])) {
      throw DegenerateDesign("design abscissae are not strictly increasing");
    }
  }

  // Critical value for interval coverage, fixed once: the null depends only
  // on n.
  std::optional<std::pair<Rational, Rational>> ci_setup;
  if (config.compute_ci) {
    if (!config.target_level) {
      throw DegenerateLevel("coverage experiments need a target level");
    }
    const NullDistribution null = exact_null(config.n, config.null_ceiling);
    ci_setup = critical_value(null, *config.target_level);
  }

  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<double> beta_tilde(reps), beta_hat(reps), beta_star(reps), g_at_truth(reps);
  std::vector<unsigned char> covered(config.compute_ci ? reps : 0);

  // Replication bodies index into per-replication slots, and every stream is
  // keyed by (seed, replication); results are identical however the
  // replication range is partitioned.
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    Sample sample;
    sample.x = x;
    sample.y.resize(config.n);
    for (std::size_t rep = lo; rep < hi; ++rep) {
      CounterRng rng = CounterRng::for_replication(config.seed, rep);
      for (int i = 0; i < config.n; ++i) {
        sample.y[i] = config.alpha_true + config.beta_true * x[i] + model.quantile(rng.uniform01());
      }

      const bool need_step = config.compute_ci || config.full_step_path;
      bool done = false;
      if (!need_step) {
        try {
          beta_tilde[rep] = point_estimate_fast(sample).beta_tilde;
          g_at_truth[rep] = gini_at<double>(sample, config.beta_true).to_double();
          done = true;
        } catch (const BreakpointHit&) {
          // A residual tie at a probe point: fall through to the
          // tie-robust full-table path.
        }
      }
      if (!done) {
        const GiniStepFunction step = build_step_function(sample);
        beta_tilde[rep] = point_estimate(step).beta_tilde;
        g_at_truth[rep] = evaluate(step, config.beta_true).to_double();
        if (config.compute_ci) {
          const auto [lower, upper] = ci_bounds(step, ci_setup->first);
          covered[rep] =
              (lower < config.beta_true && config.beta_true < upper) ? 1 : 0;
        }
      }

      beta_hat[rep] = ols_slope(sample);
      beta_star[rep] = theil_sen(sample);
    }
  };

  if (config.threads == 1) {
    run_range(0, reps);
  } else {
    const std::size_t workers = std::min<std::size_t>(config.threads, reps);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = reps * w / workers;
      const std::size_t hi = reps * (w + 1) / workers;
      pool.emplace_back([&, lo, hi, w] {
        try {
          run_range(lo, hi);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  SimulationReport report;
  report.n = config.n;
  report.reps = config.reps;
  report.seed = config.seed;
  report.beta_tilde = estimator_stats(beta_tilde, config.beta_true);
  report.beta_hat = estimator_stats(beta_hat, config.beta_true);
  report.beta_star = estimator_stats(beta_star, config.beta_true);

  const double xbar = x.mean();
  const double t2 = (x.array() - xbar).square().sum();
  report.variance_ratio_tilde = std::nan("");
  try {
    const EfficiencyReport eff = efficiency_report(model, design);
    report.variance_ratio_tilde = report.beta_tilde.variance * 24 * t2 * eff.C * eff.C;
  } catch (const DegenerateDesign&) {
    // No asymptotic variance to compare against; leave the ratio as NaN.
  } catch (const QuadratureFailure&) {
  }

  report.null_variance_scaled = config.n * summarize(g_at_truth).variance;

  if (config.compute_ci) {
    long long hits = 0;
    for (const unsigned char c : covered) hits += c;
    CoverageStats cov;
    cov.coverage = static_cast<double>(hits) / static_cast<double>(reps);
    cov.g_star = ci_setup->first;
    cov.achieved_level = ci_setup->second;
    cov.target_level = *config.target_level;
    report.ci = cov;
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double coverage_experiment(const SimulationConfig& config) {
  SimulationConfig with_ci = config;
  with_ci.compute_ci = true;
  const SimulationReport report = run_simulation(with_ci);
  return report.ci->coverage;
}

}  // namespace cograd
