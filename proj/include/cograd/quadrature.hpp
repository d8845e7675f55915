#pragma once

#include <functional>
#include <span>

namespace cograd {

struct QuadratureResult {
  double value = 0;
  double error = 0;  // accumulated error estimate
};

/// Adaptive Gauss-Kronrod (7, 15) integration of f over (a, b) down to the
/// absolute tolerance.  Nodes are interior, so integrable endpoint
/// singularities are fine.  `initial_splits` seeds the subdivision with known
/// kink locations (they must lie strictly inside (a, b)).  Never throws on
/// its own; callers inspect `error` against their contract.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol,
                                    std::span<const double> initial_splits = {});

}  // namespace cograd
