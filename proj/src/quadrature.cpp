#include "cograd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cograd {
namespace {

// 15-point Kronrod abscissae (positive half); the even-index entries plus
// the center are the embedded 7-point Gauss rule.  Standard double-precision
// constants for the open (interior-node) pair.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  double a = 0;
  double b = 0;
  double value = 0;  // 15-point estimate
  double error = 0;  // |K15 - G7|
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int k = 0; k < 7; ++k) {
    const double offset = half * kNodes[k];
    const double pair_sum = f(center - offset) + f(center + offset);
    kronrod += kKronrodWeights[k] * pair_sum;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair_sum;
  }
  Panel out;
  out.a = a;
  out.b = b;
  out.value = kronrod * half;
  out.error = std::fabs((kronrod - gauss) * half);
  if (!std::isfinite(out.value)) out.error = HUGE_VAL;
  return out;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::span<const double> initial_splits) {
  std::vector<double> cuts;
  cuts.push_back(a);
  for (const double s : initial_splits) {
    if (s > a && s < b) cuts.push_back(s);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Panel> panels;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    panels.push_back(evaluate_panel(f, cuts[k], cuts[k + 1]));
  }

  const double min_width = (b - a) * 0x1.0p-50;
  constexpr std::size_t kPanelBudget = 20000;

  // Worst-panel-first refinement: repeatedly bisect the panel with the
  // largest error estimate until the accumulated estimate meets the target.
  while (panels.size() < kPanelBudget) {
    double total_error = 0;
    std::size_t worst = 0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      total_error += panels[k].error;
      if (panels[k].error > panels[worst].error) worst = k;
    }
    if (!(total_error > abs_tol)) break;
    const Panel target = panels[worst];
    if (target.b - target.a <= min_width) break;
    const double mid = target.a + (target.b - target.a) / 2;
    panels[worst] = evaluate_panel(f, target.a, mid);
    panels.push_back(evaluate_panel(f, mid, target.b));
  }

  // Accumulate in position order so the result does not depend on the
  // refinement history.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& p, const Panel& q) { return p.a < q.a; });
  QuadratureResult out;
  for (const Panel& p : panels) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

}  // namespace cograd
