#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "cograd/ranks.hpp"
#include "cograd/types.hpp"

namespace cograd {

/// Sorted distinct pairwise slopes, each with the index pairs that attain it.
template <class Scalar>
struct BreakpointSetT {
  std::vector<Scalar> slopes;                              // ascending, distinct
  std::vector<std::vector<std::pair<int, int>>> groups;    // per slope: (i, j), i < j, 0-based
};

using BreakpointSet = BreakpointSetT<double>;
using ExactBreakpointSet = BreakpointSetT<Rational>;

/// All N(N-1)/2 pairwise slopes (y_j - y_i)/(x_j - x_i), sorted and grouped
/// by equal value (exact for Rational scalars, relative tolerance for
/// doubles; transitive chaining closes each group).
template <class Scalar>
BreakpointSetT<Scalar> enumerate_breakpoints(const SampleT<Scalar>& sample,
                                             double tie_tol = kDefaultTieTolerance,
                                             int guard = kDefaultBreakpointGuard) {
  const int n = sample.size();
  if (n > guard) {
    throw SampleTooLarge("sample of size " + std::to_string(n) +
                         " exceeds the pairwise-slope guard of " + std::to_string(guard));
  }

  struct Entry {
    Scalar slope;
    int i;
    int j;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      entries.push_back(Entry{(sample.y[j] - sample.y[i]) / (sample.x[j] - sample.x[i]), i, j});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.slope < b.slope) return true;
    if (b.slope < a.slope) return false;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  BreakpointSetT<Scalar> out;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k == 0 ||
        !scalar_ops<Scalar>::near_equal(entries[k].slope, entries[k - 1].slope, tie_tol)) {
      out.slopes.push_back(entries[k].slope);
      out.groups.emplace_back();
    }
    out.groups.back().emplace_back(entries[k].i, entries[k].j);
  }
  return out;
}

/// Right-continuous step representation of b -> G(y; b): r breakpoints and
/// r+1 interval values, v_k holding on [b_k, b_{k+1}) with v_0 on the left
/// tail and v_r on [b_r, +inf).
template <class Scalar>
struct GiniStepFunctionT {
  int n = 0;
  std::vector<Scalar> breakpoints;
  std::vector<GiniValue> values;
};

using GiniStepFunction = GiniStepFunctionT<double>;
using ExactGiniStepFunction = GiniStepFunctionT<Rational>;

enum class StepMethod { direct, incremental };

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

/// Splits one breakpoint's pair group into its collinear families (connected
/// components of the equal-slope pair graph), each listed in index order.
inline std::vector<std::vector<int>> collinear_families(
    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> members;
  for (const auto& [i, j] : pairs) {
    members.push_back(i);
    members.push_back(j);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  std::vector<int> local(members.size());
  auto local_of = [&](int global) {
    return static_cast<int>(std::lower_bound(members.begin(), members.end(), global) -
                            members.begin());
  };
  UnionFind uf(static_cast<int>(members.size()));
  for (const auto& [i, j] : pairs) uf.unite(local_of(i), local_of(j));

  std::vector<std::vector<int>> families;
  std::vector<int> family_of(members.size(), -1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    const int root = uf.find(static_cast<int>(k));
    if (family_of[root] < 0) {
      family_of[root] = static_cast<int>(families.size());
      families.emplace_back();
    }
    families[family_of[root]].push_back(members[k]);
  }
  return families;
}

}  // namespace detail

/// Builds the full step function.  The direct method evaluates the index at
/// one interior point per interval; the incremental method starts from the
/// identity ranks on the left tail and, at each breakpoint, reverses every
/// collinear family's block of consecutive ranks (r'_{v_i} = r_{v_i} + m - 2i
/// for the family v_0 < ... < v_m listed in ascending rank order).  Both
/// methods return identical functions.
template <class Scalar>
GiniStepFunctionT<Scalar> build_step_function(const SampleT<Scalar>& sample,
                                              StepMethod method = StepMethod::incremental,
                                              double tie_tol = kDefaultTieTolerance,
                                              int guard = kDefaultBreakpointGuard) {
  const auto bset = enumerate_breakpoints(sample, tie_tol, guard);
  const std::size_t r = bset.slopes.size();

  GiniStepFunctionT<Scalar> out;
  out.n = sample.size();
  out.breakpoints = bset.slopes;
  out.values.reserve(r + 1);

  if (method == StepMethod::direct) {
    const Scalar one = scalar_ops<Scalar>::from_int(1);
    out.values.push_back(gini_at<Scalar>(sample, bset.slopes.front() - one, tie_tol));
    for (std::size_t k = 1; k < r; ++k) {
      out.values.push_back(gini_at<Scalar>(
          sample, scalar_ops<Scalar>::midpoint(bset.slopes[k - 1], bset.slopes[k]), tie_tol));
    }
    out.values.push_back(gini_at<Scalar>(sample, bset.slopes.back() + one, tie_tol));
    return out;
  }

  const int n = sample.size();
  std::vector<long long> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);  // identity on the left tail

  IndexVector rank_vec(n);
  auto push_value = [&] {
    for (int i = 0; i < n; ++i) rank_vec[i] = static_cast<int>(ranks[i]);
    out.values.push_back(gini_index(rank_vec));
  };

  push_value();
  for (std::size_t k = 0; k < r; ++k) {
    for (auto& family : detail::collinear_families(bset.groups[k])) {
      std::sort(family.begin(), family.end(),
                [&](int a, int b) { return ranks[a] < ranks[b]; });
      const long long m = static_cast<long long>(family.size()) - 1;
      // The family occupies m+1 consecutive ranks; crossing the breakpoint
      // reverses that block.
      const long long base = ranks[family[0]];
      for (long long idx = 1; idx <= m; ++idx) {
        if (ranks[family[idx]] != base + idx) {
          throw std::logic_error("collinear family ranks are not consecutive");
        }
      }
      for (long long idx = 0; idx <= m; ++idx) {
        ranks[family[idx]] += m - 2 * idx;
      }
    }
    push_value();
  }
  return out;
}

/// Value at b under right continuity: v_k on [b_k, b_{k+1}).
template <class Scalar>
const GiniValue& evaluate(const GiniStepFunctionT<Scalar>& step, const Scalar& b) {
  const auto it = std::upper_bound(step.breakpoints.begin(), step.breakpoints.end(), b);
  return step.values[static_cast<std::size_t>(it - step.breakpoints.begin())];
}

}  // namespace cograd
