#pragma once

// Exponent algebra for composition operators and weighted embeddings, and
// estimates of the disc Poincare-Sobolev constants that transfer to every
// simply connected domain with the universal conformal weight.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/disc_field.hpp"
#include "confw/error.hpp"
#include "confw/poisson_transfer.hpp"

namespace confw {

/// Best known left endpoint of the inverse Brennan interval (s <= 3.752).
inline constexpr double kDefaultAlpha0 = 2.0 - 3.752;
/// Conjectured endpoint.
inline constexpr double kConjecturedAlpha0 = -2.0;

/// q = p s / (p + s - 2) for p > 2 and 4/3 < s < 4.
inline double q_from_ps(double p, double s) {
  if (!(p > 2.0) || !std::isfinite(p))
    throw Error(ErrorCode::ExponentOutOfRange, "q(p, s) needs p > 2");
  if (!(s > 4.0 / 3.0 && s < 4.0))
    throw Error(ErrorCode::ExponentOutOfRange, "q(p, s) needs 4/3 < s < 4");
  return p * s / (p + s - 2.0);
}

/// (|alpha0| + 2) / (|alpha0| + 1): smallest p for which the Brennan-based
/// composition and embedding bounds apply.
inline double p_min(double alpha0) {
  const double a = std::abs(alpha0);
  return (a + 2.0) / (a + 1.0);
}

struct ExponentBounds {
  double p = 0.0;
  double alpha0 = 0.0;
  double p_min = 0.0;
  double q_max = 0.0;  ///< p|a0| / (2 + |a0| - p)
  double r_max = 0.0;  ///< (2p / (2 - p)) |a0| / (2 + |a0|)
  double q_ceiling = 0.0;  ///< 2p / (4 - p)
  double r_ceiling = 0.0;  ///< p / (2 - p)
  bool conjectural = false;  ///< alpha0 = -2, the conjectured endpoint
};

/// Admissible q and r for p in (p_min(alpha0), 2). alpha0 = -2 is accepted
/// and flagged conjectural; there q_max reaches 2p/(4-p).
inline ExponentBounds exponent_bounds(double p, double alpha0) {
  if (!(alpha0 >= -2.0 && alpha0 < 0.0))
    throw Error(ErrorCode::ExponentOutOfRange, "alpha0 must lie in [-2, 0)");
  ExponentBounds b;
  b.p = p;
  b.alpha0 = alpha0;
  b.conjectural = alpha0 == kConjecturedAlpha0;
  b.p_min = p_min(alpha0);
  if (!(p > b.p_min && p < 2.0))
    throw Error(ErrorCode::ExponentOutOfRange, "p must lie in (p_min(alpha0), 2)");
  const double a = std::abs(alpha0);
  b.q_max = p * a / (2.0 + a - p);
  b.r_max = (2.0 * p / (2.0 - p)) * (a / (2.0 + a));
  b.q_ceiling = 2.0 * p / (4.0 - p);
  b.r_ceiling = p / (2.0 - p);
  const bool ok = b.conjectural ? b.q_max <= b.q_ceiling * (1.0 + 1e-15) && b.r_max <= b.r_ceiling * (1.0 + 1e-15)
                                : b.q_max < b.q_ceiling && b.r_max < b.r_ceiling;
  if (!ok || b.q_max < 1.0)
    throw Error(ErrorCode::ExponentOutOfRange, "exponent bounds violate the admissibility chain");
  return b;
}

/// The exponent tuple with its consistency relations.
struct ExponentBudget {
  double p = 2.0;
  std::optional<double> q, r, s, alpha;
  double alpha0 = kDefaultAlpha0;

  void validate() const {
    if (!(alpha0 >= -2.0 && alpha0 < 0.0)) throw Error(ErrorCode::ExponentOutOfRange, "alpha0 must lie in [-2, 0)");
    if (s && alpha && std::abs(*alpha - (2.0 - *s)) > 1e-12)
      throw Error(ErrorCode::ExponentOutOfRange, "alpha must equal 2 - s");
  }
};

enum class ConstantMethod { EigenRayleigh, BumpFamilyMax };

inline std::string_view to_string(ConstantMethod m) {
  return m == ConstantMethod::EigenRayleigh ? "eigen-rayleigh" : "bump-family-max";
}

struct ConstantEstimate {
  double value = 0.0;
  ConstantMethod method = ConstantMethod::EigenRayleigh;
  double tolerance = 0.0;
  int iterations = 0;
  /// Relative change of the Rayleigh quotient at termination (EigenRayleigh).
  double residual = 0.0;
  /// Smallest discrete Dirichlet eigenvalue (EigenRayleigh only).
  double eigenvalue = std::numeric_limits<double>::quiet_NaN();
  /// True when value is only a lower bound for the sharp constant.
  bool lower_bound_only = false;
};

inline constexpr double kPowerIterationTol = 1e-10;
inline constexpr int kPowerIterationMax = 10000;

/// Smallest eigenvalue of -Lap_h on the disc (Dirichlet) by inverse power
/// iteration from the all-ones vector, in the cell-area inner product.
inline ConstantEstimate dirichlet_eigen_estimate(const PolarGrid& grid, double tol = kPowerIterationTol,
                                                 int max_iter = kPowerIterationMax) {
  const DiscPoissonSolver solver(grid);
  std::vector<double> area(static_cast<std::size_t>(grid.n_r));
  for (int i = 0; i < grid.n_r; ++i) area[i] = cell_area(grid, i);
  auto dot = [&](std::span<const double> a, std::span<const double> b) {
    std::vector<double> rings(static_cast<std::size_t>(grid.n_r)), ring(static_cast<std::size_t>(grid.n_theta));
    for (int i = 0; i < grid.n_r; ++i) {
      for (int j = 0; j < grid.n_theta; ++j) ring[j] = a[grid.index(i, j)] * b[grid.index(i, j)];
      rings[i] = pairwise_sum(ring) * area[i];
    }
    return pairwise_sum(rings);
  };
  std::vector<double> x(grid.size(), 1.0);
  double lambda = std::numeric_limits<double>::infinity();
  ConstantEstimate est;
  est.method = ConstantMethod::EigenRayleigh;
  est.tolerance = tol;
  for (int it = 1; it <= max_iter; ++it) {
    const DiscField y = solver.solve(x);
    const auto yv = y.values();
    const double mu = -dot(x, yv) / dot(x, x);  // Rayleigh quotient of (-Lap_h)^{-1}
    const double next = 1.0 / mu;
    const double change = std::abs(next - lambda) / next;
    lambda = next;
    const double norm = std::sqrt(dot(yv, yv));
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = yv[k] / norm;
    if (!std::isfinite(lambda) || !(lambda > 0.0))
      throw Error(ErrorCode::IterationDivergence, "Rayleigh quotient left the positive reals");
    if (change < tol) {
      est.iterations = it;
      est.residual = change;
      est.eigenvalue = lambda;
      est.value = 1.0 / std::sqrt(lambda);
      return est;
    }
  }
  throw Error(ErrorCode::IterationDivergence, "inverse power iteration did not settle");
}

/// Sharp constant of ||g||_{L_r(D)} <= K ||grad g||_{L_2(D)} for r = 2
/// (1/sqrt(lambda_1)); for other r, the best ratio over the seeded bump
/// family, which is only a lower bound.
inline ConstantEstimate poincare_constant_disc(double r, const PolarGrid& grid, std::size_t family_size = 64,
                                               std::uint64_t seed = kDefaultSeed) {
  if (!(r >= 1.0)) throw Error(ErrorCode::InvalidExponents, "Poincare exponent must be >= 1");
  if (r == 2.0) return dirichlet_eigen_estimate(grid);
  ConstantEstimate est;
  est.method = ConstantMethod::BumpFamilyMax;
  est.lower_bound_only = true;
  const DiscGridSpec quad{grid.n_r, grid.n_theta, 1.0};
  for (const auto& b : random_bumps(family_size, seed)) {
    const double num = std::pow(disc_midpoint_sum([&](Complex w) { return std::pow(std::abs(b.value(w)), r); },
                                                  quad.n_r, quad.n_theta, 1.0),
                                1.0 / r);
    const double den = std::sqrt(disc_energy(b, 2.0, quad));
    if (den > 0.0) est.value = std::max(est.value, num / den);
    ++est.iterations;
  }
  return est;
}

struct TransferReport {
  /// max relative mismatch of ||f|L_r(Omega,h)|| vs ||g|L_r(D)|| and of
  /// ||grad f|L_2(Omega)|| vs ||grad g|L_2(D)||, f = g o phi
  double max_mismatch = 0.0;
  /// max over bumps of ||f|L_r(Omega,h)|| / ||grad f|L_2(Omega)||
  double max_ratio = 0.0;
};

/// Both norms of f = g o phi are computed on Omega (pulled back through psi
/// with the chain rule and the Jacobian) and compared with the disc norms.
inline TransferReport weighted_constant_check(const ConformalMap& to_disc, double r, std::span<const TestBump> bumps,
                                              DiscGridSpec spec = kEnergyGrid) {
  if (!(r >= 1.0)) throw Error(ErrorCode::InvalidExponents, "weighted norm exponent must be >= 1");
  if (to_disc.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "weighted_constant_check expects a ToDisc map");
  spec.validate();
  const ConformalMap psi = to_disc.inverse();
  TransferReport rep;
  for (const auto& g : bumps) {
    const double omega_lr = std::pow(
        disc_midpoint_sum(
            [&](Complex w) {
              const double v = std::abs(g.value(w));
              if (v == 0.0) return 0.0;
              const Complex z = psi.apply(w);
              const double h = std::norm(to_disc.apply_derivative(z));
              return std::pow(std::abs(g.value(to_disc.apply(z))), r) * h * std::norm(psi.apply_derivative(w));
            },
            spec.n_r, spec.n_theta, spec.radial_grading),
        1.0 / r);
    const double disc_lr = std::pow(disc_value_power(g, r, spec), 1.0 / r);
    const double omega_grad = std::sqrt(pullback_energy(to_disc, g, 2.0, spec));
    const double disc_grad = std::sqrt(disc_energy(g, 2.0, spec));
    if (disc_lr > 0.0) rep.max_mismatch = std::max(rep.max_mismatch, std::abs(omega_lr - disc_lr) / disc_lr);
    if (disc_grad > 0.0) {
      rep.max_mismatch = std::max(rep.max_mismatch, std::abs(omega_grad - disc_grad) / disc_grad);
      rep.max_ratio = std::max(rep.max_ratio, omega_lr / omega_grad);
    }
  }
  return rep;
}

}  // namespace confw
