#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "cograd/types.hpp"

namespace cograd {

/// Least-squares slope sum((x - xbar)(y - ybar)) / sum((x - xbar)^2).
template <class Scalar>
Scalar ols_slope(const SampleT<Scalar>& sample) {
  const int n = sample.size();
  const Scalar nn = scalar_ops<Scalar>::from_int(n);
  Scalar xbar = scalar_ops<Scalar>::from_int(0);
  Scalar ybar = scalar_ops<Scalar>::from_int(0);
  for (int i = 0; i < n; ++i) {
    xbar += sample.x[i];
    ybar += sample.y[i];
  }
  xbar = xbar / nn;
  ybar = ybar / nn;
  Scalar sxx = scalar_ops<Scalar>::from_int(0);
  Scalar sxy = scalar_ops<Scalar>::from_int(0);
  for (int i = 0; i < n; ++i) {
    const Scalar dx = sample.x[i] - xbar;
    sxx += dx * dx;
    sxy += dx * (sample.y[i] - ybar);
  }
  return sxy / sxx;
}

/// Median of the N(N-1)/2 pairwise slopes; an even count averages the two
/// central order statistics.
template <class Scalar>
Scalar theil_sen(const SampleT<Scalar>& sample) {
  const int n = sample.size();
  std::vector<Scalar> slopes;
  slopes.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      slopes.push_back((sample.y[j] - sample.y[i]) / (sample.x[j] - sample.x[i]));
    }
  }
  const std::size_t m = slopes.size();
  const std::size_t hi = m / 2;
  std::nth_element(slopes.begin(), slopes.begin() + hi, slopes.end());
  if (m % 2 == 1) return slopes[hi];
  // slopes[hi] is the upper central statistic; the lower one is the maximum
  // of the partition's left half.
  const Scalar upper = slopes[hi];
  const Scalar lower = *std::max_element(slopes.begin(), slopes.begin() + hi);
  return scalar_ops<Scalar>::midpoint(lower, upper);
}

template <class Scalar>
struct BaselineFitT {
  Scalar beta_hat{};   // least squares
  Scalar beta_star{};  // pairwise-slope median
  std::size_t slopes_used = 0;
};

using BaselineFit = BaselineFitT<double>;
using ExactBaselineFit = BaselineFitT<Rational>;

template <class Scalar>
BaselineFitT<Scalar> baseline_fit(const SampleT<Scalar>& sample) {
  BaselineFitT<Scalar> out;
  out.beta_hat = ols_slope(sample);
  out.beta_star = theil_sen(sample);
  const std::size_t n = static_cast<std::size_t>(sample.size());
  out.slopes_used = n * (n - 1) / 2;
  return out;
}

}  // namespace cograd
