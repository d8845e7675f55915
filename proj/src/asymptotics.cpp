#include "cograd/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cograd/quadrature.hpp"

namespace cograd {
namespace {

constexpr double kSqrt12 = 3.4641016151377544;

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("design limit function argument must lie in [0, 1]");
  }
}

}  // namespace

double psi_linear(double u) {
  require_unit_interval(u);
  return (2 * u * u * u - 3 * u * u) / kSqrt12;
}

DesignSequence linear_design() {
  DesignSequence d;
  d.label = "linear";
  d.generate = [](int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = i + 1;
    return x;
  };
  d.psi_limit = psi_linear;
  return d;
}

DesignSequence geometric_design(double alpha) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("geometric design needs alpha > 1");
  }
  DesignSequence d;
  d.label = "geometric";
  d.generate = [alpha](int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = std::pow(alpha, i + 1);
    return x;
  };
  d.psi_limit = [](double u) {
    require_unit_interval(u);
    return 0.0;
  };
  return d;
}

double psi_numeric(const DesignSequence& design, double u, int n) {
  require_unit_interval(u);
  if (n < 2) {
    throw std::invalid_argument("psi_numeric needs n >= 2");
  }
  if (!design.generate) {
    throw std::invalid_argument("design has no generator");
  }
  Eigen::VectorXd x = design.generate(n);
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("design generated the wrong number of points");
  }
  // Scale by the largest magnitude first: the statistic is invariant and the
  // intermediate sums stay bounded even for rapidly growing designs.
  const double scale = x.cwiseAbs().maxCoeff();
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw DegenerateDesign("design is identically zero or non-finite");
  }
  const Eigen::VectorXd xs = x / scale;
  const double xbar = xs.mean();
  const double t2 = (xs.array() - xbar).square().sum();
  if (!(t2 > 0)) {
    throw DegenerateDesign("design is constant");
  }
  // floor(n*u) with a guard against representation error in n*u.
  const int m = std::min(n, static_cast<int>(std::floor(n * u + 1e-6)));
  double acc = 0;
  for (int i = 1; i <= m; ++i) {
    acc += (xs[i - 1] - xbar) * (n * u - i);
  }
  return acc / (std::pow(n, 1.5) * std::sqrt(t2));
}

namespace {

/// (f'/f) evaluated at the u-th quantile.
std::function<double(double)> score_at_quantile(const DistributionModel& model) {
  return [&model](double u) {
    const double y = model.quantile(u);
    return model.pdf_deriv(y) / model.pdf(y);
  };
}

constexpr double kEdgeProbe = 1e-10;
constexpr double kCenterSplit[] = {0.5};

}  // namespace

double compute_C(const DistributionModel& model, const std::function<double(double)>& psi) {
  if (!psi) {
    throw std::invalid_argument("compute_C needs a design limit function");
  }
  const auto ratio = score_at_quantile(model);
  // Edge densities: nonzero only when the support is bounded (the density
  // then jumps at the edge, and the jump belongs to the derivative-of-f
  // weight as a point mass).
  const double f_left = model.pdf(model.quantile(kEdgeProbe));
  const double f_right = model.pdf(model.quantile(1 - kEdgeProbe));

  const auto main = integrate_adaptive(
      [&](double u) { return (psi(1 - u) - psi(u)) * ratio(u); }, 0.0, 1.0, 1e-8, kCenterSplit);
  if (!(main.error <= 1e-6)) {
    throw QuadratureFailure("slope-constant integral did not converge for model \"" +
                            model.label + "\" (error estimate " + std::to_string(main.error) +
                            ")");
  }
  const double jump = (psi(1.0) - psi(0.0)) * (f_left + f_right);
  const double c = main.value + jump;

  if (model.is_symmetric) {
    // Independent evaluation through the symmetry identity; a material
    // disagreement means one of the routes (or the model) is wrong.
    const auto alt = integrate_adaptive([&](double u) { return -2 * psi(u) * ratio(u); }, 0.0,
                                        1.0, 1e-8, kCenterSplit);
    if (!(alt.error <= 1e-6)) {
      throw QuadratureFailure("symmetric-route integral did not converge for model \"" +
                              model.label + "\"");
    }
    const double c_sym = alt.value - 2 * psi(0.0) * f_left + 2 * psi(1.0) * f_right;
    if (std::fabs(c - c_sym) > 1e-7) {
      throw QuadratureFailure("slope-constant routes disagree for model \"" + model.label +
                              "\": " + std::to_string(c) + " vs " + std::to_string(c_sym));
    }
  }
  return c;
}

double compute_C_alt(const DistributionModel& model) {
  const auto result = integrate_adaptive(
      [&](double u) { return u * (1 - u) * model.pdf(model.quantile(u)); }, 0.0, 1.0, 1e-9,
      kCenterSplit);
  if (!(result.error <= 1e-7)) {
    throw QuadratureFailure("rank-covariance integral did not converge for model \"" +
                            model.label + "\"");
  }
  return -kSqrt12 * result.value;
}

double compute_B(const DistributionModel& model) {
  const auto result = integrate_adaptive([&](double u) { return model.pdf(model.quantile(u)); },
                                         0.0, 1.0, 1e-9, kCenterSplit);
  if (!(result.error <= 1e-7)) {
    throw QuadratureFailure("density-square integral did not converge for model \"" +
                            model.label + "\"");
  }
  return result.value;
}

double mean_difference(const DistributionModel& model) {
  // A finite mean difference needs a finite first moment; every built-in
  // model with one also has finite variance, so the variance field is the
  // gate.
  if (!(model.variance < HUGE_VAL)) return HUGE_VAL;
  const auto result = integrate_adaptive(
      [&](double u) { return u * (1 - u) / model.pdf(model.quantile(u)); }, 0.0, 1.0, 1e-9,
      kCenterSplit);
  if (!(result.error <= 1e-7)) {
    throw QuadratureFailure("mean-difference integral did not converge for model \"" +
                            model.label + "\"");
  }
  return 2 * result.value;
}

double fisher_information(const DistributionModel& model) {
  const auto ratio = score_at_quantile(model);
  const auto result = integrate_adaptive(
      [&](double u) {
        const double r = ratio(u);
        return r * r;
      },
      0.0, 1.0, 1e-9, kCenterSplit);
  if (!(result.error <= 1e-6)) {
    throw QuadratureFailure("information integral did not converge for model \"" + model.label +
                            "\"");
  }
  return result.value;
}

EfficiencyReport efficiency_report(const DistributionModel& model, const DesignSequence& design) {
  std::function<double(double)> psi = design.psi_limit;
  if (!psi) {
    // No closed-form limit: tabulate the scaled partial sums on a grid at
    // two sizes and require them to have stabilized before interpolating.
    constexpr int kGrid = 256;
    std::vector<double> table(kGrid + 1);
    double worst = 0;
    for (int k = 0; k <= kGrid; ++k) {
      const double u = static_cast<double>(k) / kGrid;
      const double coarse = psi_numeric(design, u, 10000);
      table[k] = psi_numeric(design, u, 20000);
      worst = std::max(worst, std::fabs(table[k] - coarse));
    }
    if (worst > 1e-3) {
      throw DegenerateDesign("design \"" + design.label +
                             "\" has no stable limit function (grid drift " +
                             std::to_string(worst) + ")");
    }
    psi = [table = std::move(table)](double u) {
      require_unit_interval(u);
      const double t = u * kGrid;
      const int k = std::min(static_cast<int>(t), kGrid - 1);
      const double w = t - k;
      return table[k] * (1 - w) + table[k + 1] * w;
    };
  }

  EfficiencyReport report;
  report.C = compute_C(model, psi);
  if (std::fabs(report.C) < 1e-10) {
    throw DegenerateDesign("design \"" + design.label +
                           "\" makes the slope constant vanish; the asymptotic variance "
                           "formulas do not apply");
  }
  report.B = compute_B(model);
  report.sigma2 = model.variance;
  const double c2 = report.C * report.C;
  report.are_vs_ols = report.sigma2 < HUGE_VAL ? 24 * report.sigma2 * c2 : HUGE_VAL;
  report.are_vs_theil = 2 * c2 / (report.B * report.B);
  report.var_tilde = 1 / (24 * c2);
  report.var_hat = report.sigma2;
  report.var_star = 1 / (12 * report.B * report.B);
  return report;
}

}  // namespace cograd
