#include "roughwave/numerics.h"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace roughwave {

QuadratureResult Integrate(const std::function<double(double)>& f, double a,
                           double b, double tolerance,
                           const std::vector<double>& breaks) {
  std::vector<double> points{a};
  for (double p : breaks) {
    if (p > a && p < b) points.push_back(p);
  }
  points.push_back(b);
  std::sort(points.begin(), points.end());
  QuadratureResult out;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] <= points[i]) continue;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, points[i], points[i + 1], 15, tolerance, &err);
    out.value += v;
    out.error += err;
    if (err > 100 * tolerance * std::max(1.0, std::abs(v))) out.converged = false;
  }
  return out;
}

double Trapezoid(const std::vector<double>& values, double step) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * step;
}

std::vector<double> Differentiate(const std::vector<double>& values,
                                  double step) {
  const size_t n = values.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (size_t i = 1; i + 1 < n; ++i) {
    d[i] = (values[i + 1] - values[i - 1]) / (2 * step);
  }
  d[0] = (-3 * values[0] + 4 * values[1] - values[2]) / (2 * step);
  d[n - 1] = (3 * values[n - 1] - 4 * values[n - 2] + values[n - 3]) / (2 * step);
  return d;
}

}  // namespace roughwave
