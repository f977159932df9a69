#pragma once

#include <numbers>
#include <utility>

namespace bellfield {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Default number of abscissae for the periodic averages below. The
// integrands in this project are trigonometric polynomials of low degree,
// for which the uniform rule is exact far below this count.
inline constexpr int kQuadraturePoints = 1024;

// Mean of f over one period [0, 2pi). On a periodic integrand the composite
// trapezoid rule collapses to the plain average over a uniform grid and is
// exact (to roundoff) for trigonometric polynomials of degree < points.
// Kahan-compensated so the roundoff does not grow with the point count.
template <typename F>
double periodic_mean(F&& f, int points = kQuadraturePoints) {
  double sum = 0.0;
  double carry = 0.0;
  for (int k = 0; k < points; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / points;
    const double y = f(theta) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum / points;
}

}  // namespace bellfield
