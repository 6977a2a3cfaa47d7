#include "skewlab/window.hpp"

#include <cmath>

namespace skewlab::dist {
namespace {

double bspline_linear(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 1.0 - a : 0.0;
}

double bspline_cubic(double x) {
  const double a = std::abs(x);
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) {
    const double r = 2.0 - a;
    return r * r * r / 6.0;
  }
  return 0.0;
}

// sin(c y)/y, continuous at 0.
double sin_ratio(double c, double y) {
  if (std::abs(y) < 1e-8) return c * (1.0 - c * c * y * y / 6.0);
  return std::sin(c * y) / y;
}

}  // namespace

WindowPair WindowPair::fejer_default() { return WindowPair(); }

double WindowPair::lower(double y) const {
  const double u = 0.5 * sin_ratio(4.0, y);
  const double u2 = u * u;
  return (u2 * u2 - u2) / 12.0;
}

double WindowPair::upper(double y) const {
  const double v = 2.0 * sin_ratio(1.0, y);
  return v * v;
}

double WindowPair::lower_transform(double t) const {
  return (2.0 * bspline_cubic(t / 8.0) - 0.5 * bspline_linear(t / 8.0)) / 12.0;
}

double WindowPair::upper_transform(double t) const {
  const double a = std::abs(t);
  return a < 2.0 ? 2.0 - a : 0.0;
}

bool WindowPair::sandwich_holds(int grid_points) const {
  if (!(lower_transform(0.0) > 0.0)) return false;
  for (int i = 0; i < grid_points; ++i) {
    const double y = -10.0 + 20.0 * i / (grid_points - 1);
    const double chi = std::abs(y) <= 1.0 ? 1.0 : 0.0;
    if (lower(y) > chi + 1e-15 || upper(y) < chi - 1e-15) return false;
  }
  return true;
}

}  // namespace skewlab::dist
