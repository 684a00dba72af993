#pragma once

// Scalar fields on the unit disc, closed-form test bumps, and the pullback
// identities for Dirichlet energies and gradient norms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/error.hpp"
#include "confw/quadrature.hpp"

namespace confw {

/// Uniform polar grid: r_i = (i + 1/2) / n_r, theta_j = 2 pi j / n_theta.
struct PolarGrid {
  int n_r = 64;
  int n_theta = 64;

  double dr() const noexcept { return 1.0 / n_r; }
  double dtheta() const noexcept { return 2.0 * std::numbers::pi / n_theta; }
  double r(int i) const noexcept { return (i + 0.5) / n_r; }
  double theta(int j) const noexcept { return dtheta() * j; }
  Complex node(int i, int j) const noexcept { return std::polar(r(i), theta(j)); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_r) * n_theta; }
  std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(i) * n_theta + j; }

  void validate() const {
    if (n_r < 1 || n_theta < 1) throw Error(ErrorCode::InvalidGrid, "grid sizes must be positive");
  }
};

class DiscField {
 public:
  DiscField(PolarGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.size()) throw Error(ErrorCode::InvalidGrid, "value count does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "field values must be finite");
  }

  template <class F>
  static DiscField sample(PolarGrid grid, F&& f) {
    grid.validate();
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.n_r; ++i)
      for (int j = 0; j < grid.n_theta; ++j) v[grid.index(i, j)] = f(grid.node(i, j));
    return DiscField(grid, std::move(v));
  }

  const PolarGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double at(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }

  DiscField scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return DiscField(grid_, std::move(v));
  }

  /// CSV `x,y,value`, one row per node, 17 significant digits.
  void write_csv(std::ostream& os, const char* value_name = "value") const {
    os << "x,y," << value_name << "\n" << std::setprecision(17);
    for (int i = 0; i < grid_.n_r; ++i)
      for (int j = 0; j < grid_.n_theta; ++j) {
        const Complex w = grid_.node(i, j);
        os << w.real() << ',' << w.imag() << ',' << at(i, j) << '\n';
      }
  }

 private:
  PolarGrid grid_;
  std::vector<double> values_;
};

struct VectorField {
  PolarGrid grid;
  std::vector<double> x, y;
};

/// Second-order finite-difference gradient in Cartesian components. The
/// innermost ring differences across the origin (theta + pi); the outermost
/// ring uses a one-sided three-point stencil.
inline VectorField gradient(const DiscField& f) {
  const PolarGrid& g = f.grid();
  if (g.n_r < 16 || g.n_theta < 16) throw Error(ErrorCode::GridTooCoarse, "gradient needs grid sizes >= 16");
  if (g.n_theta % 2 != 0) throw Error(ErrorCode::InvalidGrid, "gradient needs an even n_theta");
  const double h = g.dr(), dth = g.dtheta();
  const int half = g.n_theta / 2;
  VectorField out{g, std::vector<double>(g.size()), std::vector<double>(g.size())};
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      double fr;
      if (i == 0)
        fr = (f.at(1, j) - f.at(0, (j + half) % g.n_theta)) / (2.0 * h);
      else if (i == g.n_r - 1)
        fr = (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) + f.at(i - 2, j)) / (2.0 * h);
      else
        fr = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
      const double ft =
          (f.at(i, (j + 1) % g.n_theta) - f.at(i, (j + g.n_theta - 1) % g.n_theta)) / (2.0 * dth);
      const double c = std::cos(g.theta(j)), s = std::sin(g.theta(j)), r = g.r(i);
      out.x[g.index(i, j)] = c * fr - s * ft / r;
      out.y[g.index(i, j)] = s * fr + c * ft / r;
    }
  return out;
}

/// Midpoint-rule cell areas of the grid (they sum to pi exactly).
inline double cell_area(const PolarGrid& g, int i) { return g.r(i) * g.dr() * g.dtheta(); }

namespace detail {

inline double field_lp(const DiscField& f, double p, const DiscField* weight) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponents, "L_p norm needs p >= 1");
  const PolarGrid& g = f.grid();
  if (weight && (weight->grid().n_r != g.n_r || weight->grid().n_theta != g.n_theta))
    throw Error(ErrorCode::InvalidGrid, "weight field lives on a different grid");
  std::vector<double> ring(static_cast<std::size_t>(g.n_theta)), rings(static_cast<std::size_t>(g.n_r));
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const double v = std::pow(std::abs(f.at(i, j)), p);
      ring[j] = weight ? v * weight->at(i, j) : v;
    }
    rings[i] = pairwise_sum(ring) * cell_area(g, i);
  }
  return std::pow(pairwise_sum(rings), 1.0 / p);
}

}  // namespace detail

inline double lp_norm(const DiscField& f, double p) { return detail::field_lp(f, p, nullptr); }

/// Weighted norm (int |f|^p weight dmu)^{1/p}; the weight is itself a field.
inline double lp_norm(const DiscField& f, double p, const DiscField& weight) {
  return detail::field_lp(f, p, &weight);
}

/// Density of nu = h dmu pulled back to the disc: (h o psi) |psi'|^2, which
/// equals 1 up to rounding for every conformal map.
inline DiscField disc_weight_field(const ConformalMap& to_disc, const PolarGrid& grid) {
  const ConformalMap psi = to_disc.inverse();
  return DiscField::sample(grid, [&](Complex w) {
    if (!psi.accepts(w)) return 1.0;  // the puncture of the exterior map is never a node
    const Complex z = psi.apply(w);
    return std::norm(to_disc.apply_derivative(z)) * std::norm(psi.apply_derivative(w));
  });
}

/// Smooth compactly supported bump A exp(1 - 1/(1 - t^2)), t = |w - c| / R.
class TestBump {
 public:
  TestBump(ComplexPoint center, double radius, double amplitude)
      : center_(center), radius_(radius), amplitude_(amplitude) {
    if (!(radius > 0.0) || !(std::abs(center_) + radius < 1.0))
      throw Error(ErrorCode::InvalidBump, "bump support must be a closed disc inside the unit disc");
    if (!std::isfinite(amplitude)) throw Error(ErrorCode::NonFiniteInput, "bump amplitude must be finite");
  }

  Complex center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  double amplitude() const noexcept { return amplitude_; }

  double value(Complex w) const noexcept {
    const double t2 = std::norm(w - center_) / (radius_ * radius_);
    if (t2 >= 1.0) return 0.0;
    return amplitude_ * std::exp(1.0 - 1.0 / (1.0 - t2));
  }

  /// Gradient as a complex number (d/dx + i d/dy).
  Complex gradient(Complex w) const noexcept {
    const Complex d = w - center_;
    const double t2 = std::norm(d) / (radius_ * radius_);
    if (t2 >= 1.0) return 0.0;
    const double one_minus = 1.0 - t2;
    const double b = amplitude_ * std::exp(1.0 - 1.0 / one_minus);
    return d * (-2.0 * b / (radius_ * radius_ * one_minus * one_minus));
  }

  TestBump scaled(double c) const { return TestBump(center_, radius_, amplitude_ * c); }

 private:
  Complex center_;
  double radius_;
  double amplitude_;
};

/// f(w) = Re w, used where a non-compactly-supported smooth function is needed.
struct RealPart {
  double value(Complex w) const noexcept { return w.real(); }
  Complex gradient(Complex) const noexcept { return 1.0; }
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Deterministic bump family; centers in |c| <= 0.6, radii in [0.1, 0.35].
inline std::vector<TestBump> random_bumps(std::size_t count, std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TestBump> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double rc = 0.6 * std::sqrt(unit(rng));
    const double ang = 2.0 * std::numbers::pi * unit(rng);
    const double radius = 0.1 + 0.25 * unit(rng);
    const double amp = 0.5 + 1.5 * unit(rng);
    out.emplace_back(std::polar(rc, ang), std::min(radius, 0.97 - rc), amp);
  }
  return out;
}

/// Default grid for smooth integrands supported away from the circle.
inline constexpr DiscGridSpec kEnergyGrid{512, 512, 1.0};

/// int_Omega |grad(f o phi)|^p dmu, evaluated on the disc as
/// int_D |grad f|^p |phi'(psi)|^p |psi'|^2 dmu (one midpoint pass on `spec`).
template <class Fn>
double pullback_energy(const ConformalMap& to_disc, const Fn& f, double p, DiscGridSpec spec = kEnergyGrid) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponents, "energy exponent must be >= 1");
  if (to_disc.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "pullback_energy expects a ToDisc map");
  spec.validate();
  const ConformalMap psi = to_disc.inverse();
  return disc_midpoint_sum(
      [&](Complex w) {
        if (f.gradient(w) == Complex{}) return 0.0;
        const Complex z = psi.apply(w);
        const double g = std::abs(f.gradient(to_disc.apply(z)));
        const double chain = g * std::abs(to_disc.apply_derivative(z));
        return std::pow(chain, p) * std::norm(psi.apply_derivative(w));
      },
      spec.n_r, spec.n_theta, spec.radial_grading);
}

/// int_D |grad f|^p dmu.
template <class Fn>
double disc_energy(const Fn& f, double p, DiscGridSpec spec = kEnergyGrid) {
  spec.validate();
  return disc_midpoint_sum([&](Complex w) { return std::pow(std::abs(f.gradient(w)), p); }, spec.n_r,
                           spec.n_theta, spec.radial_grading);
}

/// int_D |f|^p dmu.
template <class Fn>
double disc_value_power(const Fn& f, double p, DiscGridSpec spec = kEnergyGrid) {
  spec.validate();
  return disc_midpoint_sum([&](Complex w) { return std::pow(std::abs(f.value(w)), p); }, spec.n_r,
                           spec.n_theta, spec.radial_grading);
}

/// Max over bumps of |E_Omega - E_D| / E_D for the Dirichlet energy.
inline double isometry_check(const ConformalMap& to_disc, std::span<const TestBump> bumps,
                             DiscGridSpec spec = kEnergyGrid) {
  if (bumps.empty()) throw Error(ErrorCode::InvalidArgument, "isometry_check needs at least one bump");
  double worst = 0.0;
  for (const auto& b : bumps) {
    const double e_disc = disc_energy(b, 2.0, spec);
    if (e_disc == 0.0) continue;
    const double e_omega = pullback_energy(to_disc, b, 2.0, spec);
    worst = std::max(worst, std::abs(e_omega - e_disc) / e_disc);
  }
  return worst;
}

struct CompositionBound {
  double lhs = 0.0;  ///< ||grad(f o phi) | L_q(Omega)||
  double rhs = 0.0;  ///< K_{p,q} ||grad f | L_p(D)||
  double constant = 0.0;
  bool passed = false;
};

/// ||grad(f o phi)||_{L_q(Omega)} <= K_{p,q} ||grad f||_{L_p(D)} per bump,
/// with slack factor 1 + 1e-6 on the right-hand side.
inline std::vector<CompositionBound> composition_inequality_check(const ConformalMap& to_disc, double p, double q,
                                                                  std::span<const TestBump> bumps,
                                                                  DiscGridSpec spec = kEnergyGrid,
                                                                  double slack = 1e-6) {
  const QuadResult k = kpq_norm(to_disc, p, q);
  if (k.verdict != Verdict::Converged)
    throw Error(ErrorCode::KpqDivergent, "K_{p,q} is not finite for this map");
  std::vector<CompositionBound> out;
  out.reserve(bumps.size());
  for (const auto& b : bumps) {
    CompositionBound c;
    c.constant = k.value;
    c.lhs = std::pow(pullback_energy(to_disc, b, q, spec), 1.0 / q);
    c.rhs = k.value * std::pow(disc_energy(b, p, spec), 1.0 / p);
    c.passed = c.lhs <= c.rhs * (1.0 + slack);
    out.push_back(c);
  }
  return out;
}

}  // namespace confw
