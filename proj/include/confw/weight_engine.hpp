#pragma once

// Universal conformal weight h = |phi'|^2 and its diagnostics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/error.hpp"
#include "confw/quadrature.hpp"

namespace confw {

class WeightField {
 public:
  explicit WeightField(ConformalMap map) : map_(std::move(map)) {
    if (map_.direction() != MapDirection::ToDisc)
      throw Error(ErrorCode::DomainMismatch, "a weight field is built from a ToDisc map");
  }

  const ConformalMap& map() const noexcept { return map_; }
  DomainFamily family() const noexcept { return map_.family(); }

  /// h(z) = |phi'(z)|^2 for interior z.
  double operator()(ComplexPoint z) const { return std::norm(map_.derivative(z).value()); }

  double eval_unchecked(Complex z) const noexcept { return std::norm(map_.apply_derivative(z)); }

 private:
  ConformalMap map_;
};

inline double weight_eval(const WeightField& w, ComplexPoint z) { return w(z); }

/// Interior points of the map's domain, drawn as psi(w) for w uniform in the
/// disc of radius max_radius.
inline std::vector<Complex> sample_interior(const ConformalMap& to_disc, std::size_t count, std::uint64_t seed,
                                            double max_radius = 0.95) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ConformalMap psi = to_disc.inverse();
  std::vector<Complex> out;
  out.reserve(count);
  while (out.size() < count) {
    const Complex w = std::polar(max_radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    if (!psi.accepts(w)) continue;
    const Complex z = psi.apply(w);
    if (to_disc.accepts(z)) out.push_back(z);
  }
  return out;
}

struct EquivalenceReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// Admissible interval ((1-|a|)/(1+|a|))^2 .. ((1+|a|)/(1-|a|))^2.
  double lower_bound = 0.0;
  double upper_bound = 0.0;

  bool within_bounds(double rel_slack = 1e-12) const {
    return min_ratio >= lower_bound * (1.0 - rel_slack) && max_ratio <= upper_bound * (1.0 + rel_slack);
  }
};

/// Ratio h2/h1 over interior samples of the common domain. The bound is
/// derived from the automorphism connecting the two uniformizers.
inline EquivalenceReport weight_equivalence_check(const WeightField& w1, const WeightField& w2, std::size_t samples,
                                                  std::uint64_t seed = 0x5EED) {
  if (w1.family() != w2.family())
    throw Error(ErrorCode::DomainMismatch, "weights live on different domains");
  // eta = eta2 o eta1^{-1}; its zero is eta1(a2)
  const auto& e1 = w1.map().post_automorphism();
  const auto& e2 = w2.map().post_automorphism();
  const Complex a2 = e2 ? e2->a() : Complex{};
  const double m = std::abs(e1 ? (*e1)(a2) : a2);
  EquivalenceReport rep;
  rep.lower_bound = std::pow((1.0 - m) / (1.0 + m), 2);
  rep.upper_bound = std::pow((1.0 + m) / (1.0 - m), 2);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (const Complex z : sample_interior(w1.map(), samples, seed)) {
    const double ratio = w2.eval_unchecked(z) / w1.eval_unchecked(z);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

/// int_Omega h dmu, evaluated on the disc as int_D h(psi(w)) |psi'(w)|^2 dmu.
/// Equals the area of the disc for every conformal weight.
inline QuadResult weight_mass(const WeightField& w, DiscGridSpec spec = {}, int max_levels = kDefaultMaxLevels,
                              double tol = kDefaultTol) {
  const ConformalMap psi = w.map().inverse();
  return integrate_disc(
      [&](Complex u) {
        if (!psi.accepts(u)) return 1.0;
        return w.eval_unchecked(psi.apply(u)) * std::norm(psi.apply_derivative(u));
      },
      spec, max_levels, tol);
}

struct Rect {
  double x0, x1, y0, y1;
};

struct WeightClassReport {
  double p = 1.0;
  std::string compact_set;
  /// int_rect h^{1/(1-p)} for p > 1; max of 1/h over the sample grid for p = 1.
  double integral_value = 0.0;
  bool in_class = false;
};

/// V_p membership of h on a compact rectangle strictly inside the domain.
inline WeightClassReport weight_class_check(const WeightField& w, double p, const Rect& rect, int n = 64) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponents, "weight class exponent must be >= 1");
  if (!(rect.x0 < rect.x1 && rect.y0 < rect.y1))
    throw Error(ErrorCode::RectangleNotInterior, "degenerate rectangle");
  // closed rectangle: corners and a dense boundary/interior lattice
  const int check = 4 * n;
  for (int i = 0; i <= check; ++i)
    for (int j = 0; j <= check; ++j) {
      const Complex z(rect.x0 + (rect.x1 - rect.x0) * i / check, rect.y0 + (rect.y1 - rect.y0) * j / check);
      if (!contains(w.family(), z))
        throw Error(ErrorCode::RectangleNotInterior, "rectangle is not strictly inside the domain");
    }
  std::ostringstream desc;
  desc.precision(17);
  desc << "[" << rect.x0 << "," << rect.x1 << "]x[" << rect.y0 << "," << rect.y1 << "]";
  WeightClassReport rep;
  rep.p = p;
  rep.compact_set = desc.str();
  const double dx = (rect.x1 - rect.x0) / n, dy = (rect.y1 - rect.y0) / n;
  double acc = 0.0, worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double h = w.eval_unchecked({rect.x0 + (i + 0.5) * dx, rect.y0 + (j + 0.5) * dy});
      if (p == 1.0)
        worst = std::max(worst, 1.0 / h);
      else
        acc += std::pow(h, 1.0 / (1.0 - p)) * dx * dy;
    }
  rep.integral_value = p == 1.0 ? worst : acc;
  rep.in_class = std::isfinite(rep.integral_value) && rep.integral_value > 0.0;
  return rep;
}

}  // namespace confw
