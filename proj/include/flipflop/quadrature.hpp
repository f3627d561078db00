#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace flipflop {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double h = 0.5 * (b - a), m = 0.5 * (b + a);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(m + h * nodes[i]);
    return s * h;
  }

  // Composite rule over n equal panels.
  template <typename F>
  double integrate(F&& f, double a, double b, int panels) const {
    double s = 0.0;
    for (int k = 0; k < panels; ++k) s += integrate(f, a + (b - a) * k / panels, a + (b - a) * (k + 1) / panels);
    return s;
  }
};

}  // namespace flipflop
