#pragma once

// Refinement-based polar quadrature over the unit disc, and the Brennan /
// K_{p,q} integrals obtained by pulling domain integrals back to the disc.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/error.hpp"

namespace confw {

enum class Verdict { Converged, Divergent, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels_used = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> level_values;
  /// Ratio of the last two increments; the observed contraction of the
  /// refinement sequence (NaN with fewer than three levels).
  double increment_ratio = std::numeric_limits<double>::quiet_NaN();
  /// True when `value` is the geometric-tail limit rather than the last level.
  bool extrapolated = false;
};

/// Base polar grid: n_r radial cells (graded toward r = 1 through
/// r = 1 - (1 - t)^grading), n_theta angular cells.
struct DiscGridSpec {
  int n_r = 16;
  int n_theta = 16;
  double radial_grading = 3.0;

  void validate() const {
    auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
    if (!pow2(n_r) || !pow2(n_theta))
      throw Error(ErrorCode::InvalidGrid, "n_r and n_theta must be powers of two >= 8");
    if (!(radial_grading >= 1.0)) throw Error(ErrorCode::InvalidGrid, "radial grading must be >= 1");
  }
};

inline constexpr int kDefaultMaxLevels = 8;
inline constexpr double kDefaultTol = 1e-6;

/// Sum in a fixed binary-tree order, independent of any evaluation schedule.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// One midpoint-rule pass on an n_r x n_theta graded polar grid.
template <class F>
double disc_midpoint_sum(F&& f, int n_r, int n_theta, double grading) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double dtheta = two_pi / n_theta;
  std::vector<Complex> dirs(static_cast<std::size_t>(n_theta));
  for (int j = 0; j < n_theta; ++j) dirs[j] = std::polar(1.0, dtheta * (j + 0.5));
  std::vector<double> ring(static_cast<std::size_t>(n_theta));
  std::vector<double> rings(static_cast<std::size_t>(n_r));
  for (int i = 0; i < n_r; ++i) {
    const double t = (i + 0.5) / n_r;
    const double one_minus = std::pow(1.0 - t, grading);
    const double r = 1.0 - one_minus;
    const double dr = grading * one_minus / (1.0 - t) / n_r;
    for (int j = 0; j < n_theta; ++j) {
      const double v = f(r * dirs[j]);
      if (!std::isfinite(v))
        throw Error(ErrorCode::IntegrandNotFinite, "integrand returned a non-finite value at r=" +
                                                       std::to_string(r) + " theta=" +
                                                       std::to_string(dtheta * (j + 0.5)));
      ring[j] = v;
    }
    rings[i] = pairwise_sum(ring) * r * dr * dtheta;
  }
  return pairwise_sum(rings);
}

namespace detail {

// Classification of a refinement sequence v_0..v_L (see QuadResult).
//  - Converged: last increment within tol * max(1, |v|), or the increments
//    form a stable geometric tail with ratio below kMaxConvergentRatio, in
//    which case the value is the tail limit v_L + d_L * rho / (1 - rho).
//  - Divergent: the last three increments are each at least
//    kDivergentRatio times the previous one and of one sign.
inline constexpr double kDivergentRatio = 0.98;
inline constexpr double kMaxConvergentRatio = 0.96;
inline constexpr double kRatioSpread = 0.02;

inline void classify(QuadResult& q, double tol) {
  const auto& v = q.level_values;
  const std::size_t n = v.size();
  q.levels_used = static_cast<int>(n);
  q.value = v.back();
  q.verdict = Verdict::Inconclusive;
  q.extrapolated = false;
  if (n < 2) {
    q.error_estimate = std::numeric_limits<double>::infinity();
    return;
  }
  const double last = v[n - 1] - v[n - 2];
  q.error_estimate = std::abs(last);
  if (std::abs(last) <= tol * std::max(1.0, std::abs(v.back()))) {
    q.verdict = Verdict::Converged;
    if (n >= 3) q.increment_ratio = last / (v[n - 2] - v[n - 3]);
    return;
  }
  if (n < 4) return;
  std::vector<double> d(n - 1), rho;
  for (std::size_t k = 0; k + 1 < n; ++k) d[k] = v[k + 1] - v[k];
  for (std::size_t k = 1; k < d.size(); ++k) rho.push_back(d[k - 1] != 0.0 ? d[k] / d[k - 1] : 0.0);
  q.increment_ratio = rho.back();
  const auto m = rho.size();
  bool divergent = m >= 3;
  for (std::size_t k = m - std::min<std::size_t>(m, 3); k < m && divergent; ++k)
    divergent = rho[k] >= kDivergentRatio;
  if (divergent) {
    q.verdict = Verdict::Divergent;
    q.error_estimate = std::numeric_limits<double>::infinity();
    return;
  }
  if (m < 3) return;
  const double r1 = rho[m - 3], r2 = rho[m - 2], r3 = rho[m - 1];
  const double lo = std::min({r1, r2, r3}), hi = std::max({r1, r2, r3});
  if (lo > 0.0 && hi < kMaxConvergentRatio && hi - lo <= kRatioSpread) {
    const double tail = last * r3 / (1.0 - r3);
    const double prev_tail = d[d.size() - 2] * r2 / (1.0 - r2);
    const double limit = v.back() + tail;
    const double prev_limit = v[n - 2] + prev_tail;
    q.value = limit;
    q.extrapolated = true;
    q.error_estimate = std::abs(limit - prev_limit);
    q.verdict = Verdict::Converged;
  }
}

}  // namespace detail

/// Midpoint polar quadrature of f over the unit disc, doubling n_r and
/// n_theta at each level until the sequence settles or max_levels is hit.
template <class F>
QuadResult integrate_disc(F&& f, DiscGridSpec spec = {}, int max_levels = kDefaultMaxLevels,
                          double tol = kDefaultTol) {
  spec.validate();
  if (max_levels < 1) throw Error(ErrorCode::InvalidGrid, "max_levels must be >= 1");
  QuadResult q;
  for (int level = 0; level < max_levels; ++level) {
    q.level_values.push_back(
        disc_midpoint_sum(f, spec.n_r << level, spec.n_theta << level, spec.radial_grading));
    const auto n = q.level_values.size();
    if (n >= 2) {
      const double inc = q.level_values[n - 1] - q.level_values[n - 2];
      if (std::abs(inc) <= tol * std::max(1.0, std::abs(q.level_values.back()))) break;
    }
  }
  detail::classify(q, tol);
  return q;
}

/// int_Omega |phi'|^s dmu, evaluated as int_D |psi'|^{2-s} dmu.
inline QuadResult brennan_direct(const ConformalMap& map, double s, DiscGridSpec spec = {},
                                 int max_levels = kDefaultMaxLevels, double tol = kDefaultTol) {
  if (map.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "brennan_direct expects a ToDisc map");
  const ConformalMap psi = map.inverse();
  const double exponent = 2.0 - s;
  return integrate_disc([&](Complex w) { return std::pow(std::abs(psi.apply_derivative(w)), exponent); },
                        spec, max_levels, tol);
}

/// int_D |psi'|^alpha dmu with psi the inverse of `map`.
inline QuadResult inverse_brennan(const ConformalMap& map, double alpha, DiscGridSpec spec = {},
                                  int max_levels = kDefaultMaxLevels, double tol = kDefaultTol) {
  if (map.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "inverse_brennan expects a ToDisc map");
  return brennan_direct(map, 2.0 - alpha, spec, max_levels, tol);
}

/// Exponent s = (p - 2) q / (p - q) of the dilatation integral.
inline double kpq_exponent(double p, double q) {
  if (!(q >= 1.0) || !(q < p) || !std::isfinite(p))
    throw Error(ErrorCode::InvalidExponents, "K_{p,q} needs 1 <= q < p < inf");
  return (p - 2.0) * q / (p - q);
}

/// K_{p,q} = (int_Omega |phi'|^{(p-2)q/(p-q)} dmu)^{(p-q)/(pq)}. The verdict
/// and level sequence refer to the inner integral; `value` holds K.
inline QuadResult kpq_norm(const ConformalMap& map, double p, double q, DiscGridSpec spec = {},
                           int max_levels = kDefaultMaxLevels, double tol = kDefaultTol) {
  QuadResult r = brennan_direct(map, kpq_exponent(p, q), spec, max_levels, tol);
  const double power = (p - q) / (p * q);
  if (r.verdict == Verdict::Divergent) {
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  const double inner = r.value;
  r.value = std::pow(inner, power);
  // first-order propagation of the inner error
  r.error_estimate = power * std::pow(inner, power - 1.0) * r.error_estimate;
  return r;
}

}  // namespace confw
