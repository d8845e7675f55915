#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

#include "cograd/distributions.hpp"
#include "cograd/types.hpp"

namespace cograd {

/// Closed-form limit of the design function for x_i = i:
/// psi(u) = (2u^3 - 3u^2)/sqrt(12) on [0, 1].
double psi_linear(double u);

/// A deterministic design x_1 < ... < x_N for every N, with its limit
/// function when known in closed form (empty otherwise; efficiency_report
/// then tabulates the partial sums numerically and checks convergence).
struct DesignSequence {
  std::string label;
  std::function<Eigen::VectorXd(int)> generate;
  std::function<double(double)> psi_limit;
};

/// x_i = i, psi_limit = psi_linear.
DesignSequence linear_design();

/// x_i = alpha^i with alpha > 1.  The scaled partial sums vanish in the
/// limit (the normalizer T grows like the largest term), so psi_limit is
/// identically zero and the asymptotic slope theory degenerates.
DesignSequence geometric_design(double alpha = 2.0);

/// Finite-N partial sum (1/(N^{3/2} T)) * sum_{i <= floor(Nu)} (x_i - xbar)(Nu - i)
/// at N = n, computed scale-invariantly so huge designs do not overflow.
double psi_numeric(const DesignSequence& design, double u, int n);

/// The slope constant C = integral of [psi(1-F) - psi(F)] f' dy, evaluated
/// in the probability scale u = F(y) with an adaptive open rule (absolute
/// target 1e-8).  Densities with bounded support contribute their edge jumps
/// to the f' term; the jump terms are added from density probes at extreme
/// quantiles.  For symmetric models the independent route
/// -2 * integral of psi(F) f' dy is evaluated as well and must agree within
/// 1e-7.  Throws QuadratureFailure past 1e-6 error or on route disagreement.
double compute_C(const DistributionModel& model, const std::function<double(double)>& psi);

/// Independent route for the linear design only:
/// C = -sqrt(12) * integral of F(1-F) f^2 dy = -sqrt(12) * int_0^1 u(1-u) f(Q(u)) du.
double compute_C_alt(const DistributionModel& model);

/// B = integral of f^2 = int_0^1 f(Q(u)) du, absolute target 1e-9.
double compute_B(const DistributionModel& model);

/// Population mean difference Delta(F) = 2 * integral of F(1-F) dy
/// (+infinity for laws without a finite mean difference, e.g. Cauchy).
double mean_difference(const DistributionModel& model);

/// Fisher information integral of (f'/f)^2 f (validation diagnostic only).
double fisher_information(const DistributionModel& model);

/// Asymptotic constants and relative efficiencies for one (model, design)
/// pair.  Variances are per unit T^2.
struct EfficiencyReport {
  double C = 0;
  double B = 0;
  double sigma2 = 0;        // may be +infinity
  double are_vs_ols = 0;    // 24 sigma^2 C^2, +infinity when sigma^2 is
  double are_vs_theil = 0;  // 2 C^2 / B^2
  double var_tilde = 0;     // 1 / (24 C^2)
  double var_hat = 0;       // sigma^2
  double var_star = 0;      // 1 / (12 B^2)
};

/// Populates the report; throws DegenerateDesign when |C| < 1e-10 (the
/// asymptotic slope theory needs C != 0).
EfficiencyReport efficiency_report(const DistributionModel& model, const DesignSequence& design);

}  // namespace cograd
