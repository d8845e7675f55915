#pragma once

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "cograd/types.hpp"

namespace cograd {

/// Normalizer D of the cograduation index: N^2 for even N, N^2 - 1 for odd N.
inline long long gini_denominator(int n) {
  if (n < 2) throw std::invalid_argument("index is defined for N >= 2");
  const long long nn = static_cast<long long>(n) * n;
  return n % 2 == 0 ? nn : nn - 1;
}

/// Ranks of a vector of pairwise-distinct values: ranks[i] = #{j : v_j <= v_i}.
/// Doubles tie under the relative tolerance; Rationals tie only when exactly
/// equal (the tolerance argument is ignored).
template <class Scalar>
IndexVector compute_ranks(const Vector<Scalar>& values, double tie_tol = kDefaultTieTolerance) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  for (int k = 1; k < n; ++k) {
    if (scalar_ops<Scalar>::near_equal(values[order[k - 1]], values[order[k]], tie_tol)) {
      throw TiedValues("tied values at sorted positions " + std::to_string(k - 1) + " and " +
                       std::to_string(k));
    }
  }
  IndexVector ranks(n);
  for (int k = 0; k < n; ++k) ranks[order[k]] = k + 1;
  return ranks;
}

/// The cograduation index of a rank permutation:
/// (2/D) * sum_i (|N+1-i-r_i| - |i-r_i|), exact.
inline GiniValue gini_index(const IndexVector& ranks) {
  const int n = static_cast<int>(ranks.size());
  if (n < 2) throw std::invalid_argument("rank vector must have length >= 2");
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    const int r = ranks[i];
    if (r < 1 || r > n || seen[r]) {
      throw std::invalid_argument("ranks are not a permutation of 1..N");
    }
    seen[r] = 1;
  }
  long long u = 0;
  long long v = 0;
  for (int i = 0; i < n; ++i) {
    const long long r = ranks[i];
    u += std::llabs((i + 1) - r);
    v += std::llabs((n - i) - r);  // N + 1 - (i + 1) = n - i
  }
  return GiniValue{2 * (v - u), gini_denominator(n)};
}

/// Index of concordance between y - b*x and the (already increasing) x.
/// Throws BreakpointHit when b is a pairwise slope, i.e. residuals tie.
template <class Scalar>
GiniValue gini_at(const SampleT<Scalar>& sample, const Scalar& b,
                  double tie_tol = kDefaultTieTolerance) {
  const int n = sample.size();
  Vector<Scalar> residuals(n);
  for (int i = 0; i < n; ++i) residuals[i] = sample.y[i] - b * sample.x[i];
  try {
    return gini_index(compute_ranks<Scalar>(residuals, tie_tol));
  } catch (const TiedValues&) {
    throw BreakpointHit("slope lies on a residual tie; evaluate the step function instead");
  }
}

}  // namespace cograd
