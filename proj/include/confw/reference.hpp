#pragma once

// Reference values that do not go through the numerical machinery: formulas
// in their commonly quoted closed forms for the example domains, the first zero of J0
// by series + bisection, and the closed-form integrability range of the
// Koebe derivative.

#include <cmath>
#include <complex>

#include "confw/complex_point.hpp"

namespace confw::reference {

/// h = 1/|z|^4 for the exterior of the disc, phi = 1/z.
inline double exterior_h(Complex z) {
  const double s = std::norm(z);
  return 1.0 / (s * s);
}

/// h = 4/(x^2 + (y+1)^2)^2 for the upper half-plane, Cayley map.
inline double halfplane_h(Complex z) {
  const double d = z.real() * z.real() + (z.imag() + 1.0) * (z.imag() + 1.0);
  return 4.0 / (d * d);
}

/// Strip weight as printed in expanded form, 1/((x^2+y^2)^2 + x^2 - y^2 + 1).
inline double strip_h_printed(Complex z) {
  const double x = z.real(), y = z.imag(), s = x * x + y * y;
  return 1.0 / (s * s + x * x - y * y + 1.0);
}

/// Strip weight as printed in compact form, 1/|z^2 + 1|^2.
inline double strip_h_printed_compact(Complex z) { return 1.0 / std::norm(z * z + 1.0); }

/// Cardioid map as printed, sqrt(z) - 1.
inline Complex cardioid_phi_printed(Complex z) { return std::sqrt(z) - 1.0; }

/// |d/dz (sqrt(z) - 1)|^2 = 1/(4|z|).
inline double cardioid_printed_map_h(Complex z) { return 1.0 / (4.0 * std::abs(z)); }

/// Cardioid weight as printed, 1/(2 |z|^{1/2}).
inline double cardioid_h_printed(Complex z) { return 1.0 / (2.0 * std::sqrt(std::abs(z))); }

/// J0 by its power series, adequate for 0 <= x <= 6.
inline double bessel_j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (double(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// First positive zero of J0 by bisection on [2, 3].
inline double bessel_j0_first_zero() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0_series(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// int_D |k'(w)|^{2-s} dmu, k'(w) = (1+w)/(1-w)^3, is finite iff both
/// boundary singularities are area-integrable: |1-w|^{-3(2-s)} near w = 1
/// and |1+w|^{2-s} near w = -1 (|x|^{-b} is integrable in the plane iff b < 2).
inline bool koebe_brennan_finite(double s) {
  const double a = 2.0 - s;
  return 3.0 * a < 2.0 && -a < 2.0;
}

/// Area of the cardioid r = (1 + cos t)/2: (1/2) int r^2 dt = 3 pi / 8.
inline double cardioid_area() { return 3.0 * std::acos(-1.0) / 8.0; }

}  // namespace confw::reference
