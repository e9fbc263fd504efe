// Adaptive composite Gauss-Legendre quadrature on a finite interval.
#pragma once

#include <functional>
#include <vector>

namespace coopsense {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int points);
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Integrates f over [lo, hi]. Each panel is accepted once the rule on the
/// panel and the rule on its two halves differ by less than the panel's share
/// (width / (hi - lo)) of abs_tol. Throws ConvergenceError when max_panels is
/// exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, int max_panels = 4096);

}  // namespace coopsense
