#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "cograd/distributions.hpp"
#include "cograd/null_dist.hpp"
#include "cograd/step_function.hpp"
#include "cograd/types.hpp"

namespace cograd {

/// The slope estimate: midpoint of sup{b : G > 0} and inf{b : G < 0}.  When
/// the step function has a flat stretch at exactly zero, that stretch is
/// reported and the estimate is its midpoint; otherwise the estimate is the
/// sign-change breakpoint itself.
template <class Scalar>
struct SlopeEstimateT {
  Scalar beta_tilde{};
  std::optional<std::pair<Scalar, Scalar>> zero_plateau;
};

using SlopeEstimate = SlopeEstimateT<double>;
using ExactSlopeEstimate = SlopeEstimateT<Rational>;

namespace detail {

/// First interval index whose value is <= 0 (k1) and < 0 (k2); the left
/// endpoints of those intervals realize sup{G > 0} and inf{G < 0}.
template <class Scalar>
std::pair<std::size_t, std::size_t> sign_change_indices(const GiniStepFunctionT<Scalar>& step) {
  const Rational zero(0);
  std::size_t k1 = 0;
  while (k1 < step.values.size() && zero < step.values[k1].reduced()) ++k1;
  std::size_t k2 = k1;
  while (k2 < step.values.size() && !(step.values[k2].reduced() < zero)) ++k2;
  return {k1, k2};
}

template <class Scalar>
SlopeEstimateT<Scalar> estimate_from_indices(const std::vector<Scalar>& breakpoints,
                                             std::size_t k1, std::size_t k2) {
  const Scalar& sup_positive = breakpoints[k1 - 1];
  const Scalar& inf_negative = breakpoints[k2 - 1];
  SlopeEstimateT<Scalar> out;
  out.beta_tilde = scalar_ops<Scalar>::midpoint(sup_positive, inf_negative);
  if (k2 > k1) out.zero_plateau = std::make_pair(sup_positive, inf_negative);
  return out;
}

}  // namespace detail

template <class Scalar>
SlopeEstimateT<Scalar> point_estimate(const GiniStepFunctionT<Scalar>& step) {
  const auto [k1, k2] = detail::sign_change_indices(step);
  return detail::estimate_from_indices(step.breakpoints, k1, k2);
}

/// Confidence bounds at critical value g_star (0 < g_star <= 1):
/// lower = inf{b : G < G*} = left endpoint of the first interval with value < G*;
/// upper = sup{b : G > -G*} = left endpoint of the first interval with value <= -G*.
template <class Scalar>
std::pair<Scalar, Scalar> ci_bounds(const GiniStepFunctionT<Scalar>& step,
                                    const Rational& g_star) {
  if (!(Rational(0) < g_star) || Rational(1) < g_star) {
    throw DegenerateLevel("critical value must lie in (0, 1]");
  }
  std::size_t lo = 0;
  while (!(step.values[lo].reduced() < g_star)) ++lo;  // v_0 = 1 >= g_star, v_r = -1 < g_star
  std::size_t hi = lo;
  const Rational neg = -g_star;
  while (neg < step.values[hi].reduced()) ++hi;
  return {step.breakpoints[lo - 1], step.breakpoints[hi - 1]};
}

enum class NullFallback {
  forbid,             // NullTooLarge beyond the enumeration ceiling
  asymptotic_normal,  // G* from the normal limit law, variance 2/(3N)
};

struct NullOptions {
  int ceiling = kDefaultNullCeiling;
  NullFallback fallback = NullFallback::asymptotic_normal;
};

enum class NullSource { exact, asymptotic_normal };

template <class Scalar>
struct ConfidenceIntervalT {
  Scalar lower{};
  Scalar upper{};
  Rational g_star{0};
  std::optional<Rational> achieved_level;  // exact null only
  double target_level = 0;
  NullSource source = NullSource::exact;
};

using ConfidenceInterval = ConfidenceIntervalT<double>;
using ExactConfidenceInterval = ConfidenceIntervalT<Rational>;

/// Distribution-free confidence interval for the slope: picks G* from the
/// exact null (or, beyond the enumeration ceiling and when permitted, from
/// the asymptotic normal null, recording the source) and inverts the
/// acceptance region through ci_bounds.
template <class Scalar>
ConfidenceIntervalT<Scalar> confidence_interval(const SampleT<Scalar>& sample,
                                                double target_level,
                                                const NullOptions& options = {}) {
  if (!(target_level > 0.0 && target_level < 1.0)) {
    throw DegenerateLevel("target level must lie strictly between 0 and 1");
  }
  ConfidenceIntervalT<Scalar> out;
  out.target_level = target_level;
  if (sample.size() <= options.ceiling) {
    const NullDistribution null = exact_null(sample.size(), options.ceiling);
    const auto [g_star, achieved] = critical_value(null, target_level);
    out.g_star = g_star;
    out.achieved_level = achieved;
    out.source = NullSource::exact;
  } else if (options.fallback == NullFallback::forbid) {
    throw NullTooLarge("n = " + std::to_string(sample.size()) +
                       " exceeds the exact-null ceiling and no approximate null is permitted");
  } else {
    const double z = normal_quantile(0.5 + target_level / 2);
    const double g = std::min(1.0, z * std::sqrt(2.0 / (3.0 * sample.size())));
    out.g_star = Rational::from_double(g);
    out.source = NullSource::asymptotic_normal;
  }
  const auto step = build_step_function(sample);
  std::tie(out.lower, out.upper) = ci_bounds(step, out.g_star);
  return out;
}

/// Point estimate without materializing the value table: binary search over
/// the sorted breakpoints using monotonicity, evaluating the index at
/// interval interior points only.  Agrees exactly with the step-function
/// path.
template <class Scalar>
SlopeEstimateT<Scalar> point_estimate_fast(const SampleT<Scalar>& sample,
                                           double tie_tol = kDefaultTieTolerance,
                                           int guard = kDefaultBreakpointGuard) {
  const auto bset = enumerate_breakpoints(sample, tie_tol, guard);
  const std::vector<Scalar>& slopes = bset.slopes;
  const std::size_t r = slopes.size();
  const Scalar one = scalar_ops<Scalar>::from_int(1);

  auto value_at = [&](std::size_t interval) -> Rational {
    Scalar b;
    if (interval == 0) {
      b = slopes.front() - one;
    } else if (interval == r) {
      b = slopes.back() + one;
    } else {
      b = scalar_ops<Scalar>::midpoint(slopes[interval - 1], slopes[interval]);
    }
    return gini_at<Scalar>(sample, b, tie_tol).reduced();
  };

  // Smallest interval index whose value satisfies `pred` (monotone in the
  // index because the step function is nonincreasing).
  auto search = [&](auto&& pred) {
    std::size_t lo = 0;  // pred(0) is false: v_0 = 1
    std::size_t hi = r;  // pred(r) is true: v_r = -1
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (pred(value_at(mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  const Rational zero(0);
  const std::size_t k1 = search([&](const Rational& v) { return !(zero < v); });
  const std::size_t k2 = search([&](const Rational& v) { return v < zero; });
  return detail::estimate_from_indices(slopes, k1, k2);
}

}  // namespace cograd
