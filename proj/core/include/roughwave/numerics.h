#pragma once

#include <functional>
#include <vector>

namespace roughwave {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod over [a, b], split at the given interior points.
QuadratureResult Integrate(const std::function<double(double)>& f, double a,
                           double b, double tolerance = 1e-10,
                           const std::vector<double>& breaks = {});

/// Trapezoid rule on uniformly spaced samples.
double Trapezoid(const std::vector<double>& values, double step);

/// Central differences in the interior, second-order one-sided at the ends.
std::vector<double> Differentiate(const std::vector<double>& values,
                                  double step);

}  // namespace roughwave
