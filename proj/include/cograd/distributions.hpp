#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "cograd/types.hpp"

namespace cograd {

/// Error-law interface consumed by the asymptotics and simulation modules:
/// density, its derivative, distribution function, quantile function, and
/// variance (+infinity allowed).
struct DistributionModel {
  std::string label;
  std::function<double(double)> pdf;
  std::function<double(double)> pdf_deriv;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  double variance = 0.0;
  bool is_symmetric = false;
};

DistributionModel normal_model();
DistributionModel laplace_model();
DistributionModel cauchy_model();
DistributionModel uniform_model();

/// Lookup by lower-case name: "normal", "laplace", "cauchy", "uniform".
DistributionModel model_by_name(std::string_view name);

/// Grid validation of a (possibly user-supplied) model: quantile/cdf
/// round-trip within 1e-8, pdf nonnegative, pdf_deriv consistent with pdf by
/// central differences within 1e-5.  Throws std::invalid_argument on
/// failure.
void validate_model(const DistributionModel& model);

/// Quantile of the standard normal law (rational approximation polished by
/// Newton steps on the erfc-based cdf; absolute error far below 1e-12).
double normal_quantile(double u);

}  // namespace cograd
