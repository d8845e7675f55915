#include "cograd/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cograd {
namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_pdf(double y) { return kInvSqrt2Pi * std::exp(-0.5 * y * y); }

double normal_cdf(double y) { return 0.5 * std::erfc(-y / kSqrt2); }

/// Rational initial guess for the normal quantile (relative error ~1e-9)
/// with Halley + Newton polish through the erfc-based cdf.
double normal_quantile_impl(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("normal quantile needs an argument in (0, 1)");
  }
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;

  double x;
  if (u < low) {
    const double q = std::sqrt(-2 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (u <= 1 - low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }

  // Two corrector steps; skipped in the extreme tails where exp(x^2/2)
  // overflows (the rational guess alone is already ~1e-9 relative there).
  for (int step = 0; step < 2 && std::fabs(x) < 37.0; ++step) {
    const double err = normal_cdf(x) - u;
    const double update = err * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= update / (1 + x * update / 2);  // Halley form
  }
  return x;
}

}  // namespace

double normal_quantile(double u) { return normal_quantile_impl(u); }

DistributionModel normal_model() {
  DistributionModel m;
  m.label = "normal";
  m.pdf = normal_pdf;
  m.pdf_deriv = [](double y) { return -y * normal_pdf(y); };
  m.cdf = normal_cdf;
  m.quantile = normal_quantile_impl;
  m.variance = 1.0;
  m.is_symmetric = true;
  return m;
}

DistributionModel laplace_model() {
  DistributionModel m;
  m.label = "laplace";
  m.pdf = [](double y) { return 0.5 * std::exp(-std::fabs(y)); };
  m.pdf_deriv = [](double y) {
    if (y == 0.0) return 0.0;
    return (y > 0 ? -0.5 : 0.5) * std::exp(-std::fabs(y));
  };
  m.cdf = [](double y) { return y < 0 ? 0.5 * std::exp(y) : 1 - 0.5 * std::exp(-y); };
  m.quantile = [](double u) {
    if (!(u > 0.0 && u < 1.0)) {
      throw std::domain_error("laplace quantile needs an argument in (0, 1)");
    }
    return u < 0.5 ? std::log(2 * u) : -std::log(2 * (1 - u));
  };
  m.variance = 2.0;
  m.is_symmetric = true;
  return m;
}

DistributionModel cauchy_model() {
  DistributionModel m;
  m.label = "cauchy";
  m.pdf = [](double y) { return 1.0 / (kPi * (1 + y * y)); };
  m.pdf_deriv = [](double y) {
    const double s = 1 + y * y;
    return -2 * y / (kPi * s * s);
  };
  m.cdf = [](double y) { return 0.5 + std::atan(y) / kPi; };
  m.quantile = [](double u) {
    if (!(u > 0.0 && u < 1.0)) {
      throw std::domain_error("cauchy quantile needs an argument in (0, 1)");
    }
    return std::tan(kPi * (u - 0.5));
  };
  m.variance = HUGE_VAL;
  m.is_symmetric = true;
  return m;
}

DistributionModel uniform_model() {
  DistributionModel m;
  m.label = "uniform";
  m.pdf = [](double y) { return (y >= 0.0 && y <= 1.0) ? 1.0 : 0.0; };
  m.pdf_deriv = [](double) { return 0.0; };
  m.cdf = [](double y) { return std::clamp(y, 0.0, 1.0); };
  m.quantile = [](double u) {
    if (!(u > 0.0 && u < 1.0)) {
      throw std::domain_error("uniform quantile needs an argument in (0, 1)");
    }
    return u;
  };
  m.variance = 1.0 / 12.0;
  m.is_symmetric = true;  // about its own center, which is all the theory uses
  return m;
}

DistributionModel model_by_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (key == "normal" || key == "gaussian") return normal_model();
  if (key == "laplace") return laplace_model();
  if (key == "cauchy") return cauchy_model();
  if (key == "uniform") return uniform_model();
  throw std::invalid_argument("unknown error model \"" + std::string(name) +
                              "\"; expected normal, laplace, cauchy, or uniform");
}

void validate_model(const DistributionModel& model) {
  if (!model.pdf || !model.pdf_deriv || !model.cdf || !model.quantile) {
    throw std::invalid_argument("model \"" + model.label + "\" is missing a component");
  }
  double prev = -HUGE_VAL;
  for (int k = 1; k <= 49; ++k) {
    const double u = 0.02 * k;
    const double y = model.quantile(u);
    if (!(y > prev)) {
      throw std::invalid_argument("model \"" + model.label + "\" has a non-increasing quantile");
    }
    prev = y;
    if (std::fabs(model.cdf(y) - u) > 1e-8) {
      throw std::invalid_argument("model \"" + model.label +
                                  "\" fails the cdf/quantile round trip at u = " +
                                  std::to_string(u));
    }
    if (model.pdf(y) < 0) {
      throw std::invalid_argument("model \"" + model.label + "\" has a negative density");
    }
  }
  // Central-difference check of the density derivative, away from the
  // center where a symmetric density may legitimately have a kink.
  for (int k = 1; k <= 19; ++k) {
    if (k == 10) continue;
    const double y = model.quantile(0.05 * k);
    const double h = 1e-6;
    const double fd = (model.pdf(y + h) - model.pdf(y - h)) / (2 * h);
    const double an = model.pdf_deriv(y);
    if (std::fabs(fd - an) > 1e-5 * std::max(1.0, std::fabs(an))) {
      throw std::invalid_argument("model \"" + model.label +
                                  "\" has an inconsistent density derivative at y = " +
                                  std::to_string(y));
    }
  }
}

}  // namespace cograd
