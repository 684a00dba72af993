#pragma once

#include <cmath>
#include <complex>

#include "confw/error.hpp"

namespace confw {

using Complex = std::complex<double>;

/// A point of the plane with finite coordinates.
class ComplexPoint {
 public:
  ComplexPoint() = default;
  ComplexPoint(double re, double im) : z_(re, im) { check(); }
  ComplexPoint(Complex z) : z_(z) { check(); }  // NOLINT(google-explicit-constructor)

  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }
  Complex value() const noexcept { return z_; }
  operator Complex() const noexcept { return z_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(const ComplexPoint&, const ComplexPoint&) = default;

 private:
  void check() const {
    if (!std::isfinite(z_.real()) || !std::isfinite(z_.imag()))
      throw Error(ErrorCode::NonFiniteInput, "complex point must have finite components");
  }

  Complex z_{};
};

}  // namespace confw
