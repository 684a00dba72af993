#pragma once

// Closed-form conformal maps between explicit simply connected domains and
// the unit disc, together with the disc automorphisms used to change the
// uniformizer.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confw/complex_point.hpp"
#include "confw/error.hpp"

namespace confw {

enum class DomainFamily { DiscIdentity, ExteriorOfDisc, UpperHalfPlane, Strip, Cardioid, SlitPlane };

inline constexpr std::array<DomainFamily, 6> kAllFamilies = {
    DomainFamily::DiscIdentity, DomainFamily::ExteriorOfDisc, DomainFamily::UpperHalfPlane,
    DomainFamily::Strip,        DomainFamily::Cardioid,       DomainFamily::SlitPlane};

/// Lowercase CLI name of a family.
inline std::string_view family_name(DomainFamily f) {
  switch (f) {
    case DomainFamily::DiscIdentity: return "disc";
    case DomainFamily::ExteriorOfDisc: return "exterior";
    case DomainFamily::UpperHalfPlane: return "halfplane";
    case DomainFamily::Strip: return "strip";
    case DomainFamily::Cardioid: return "cardioid";
    case DomainFamily::SlitPlane: return "slitplane";
  }
  return "?";
}

inline DomainFamily parse_family(std::string_view name) {
  for (auto f : kAllFamilies)
    if (family_name(f) == name) return f;
  throw Error(ErrorCode::UnknownName, "unknown domain family '" + std::string(name) + "'");
}

/// Strict membership predicate of the open domain.
inline bool contains(DomainFamily f, Complex z) {
  const double x = z.real(), y = z.imag();
  switch (f) {
    case DomainFamily::DiscIdentity: return x * x + y * y < 1.0;
    case DomainFamily::ExteriorOfDisc: return x * x + y * y > 1.0;
    case DomainFamily::UpperHalfPlane: return y > 0.0;
    case DomainFamily::Strip: return std::abs(x) < std::numbers::pi / 4;
    case DomainFamily::Cardioid: {
      const double r = std::abs(z);
      if (r == 0.0) return false;
      return r < 0.5 * (1.0 + std::cos(std::arg(z)));
    }
    case DomainFamily::SlitPlane: return !(y == 0.0 && x <= -0.25);
  }
  return false;
}

/// True for the families whose map uses the principal square root.
inline bool uses_square_root(DomainFamily f) {
  return f == DomainFamily::Cardioid || f == DomainFamily::SlitPlane;
}

/// eta(w) = e^{i rotation} (w - a) / (1 - conj(a) w), an automorphism of the disc.
class MoebiusAutomorphism {
 public:
  MoebiusAutomorphism() = default;
  MoebiusAutomorphism(ComplexPoint a, double rotation) : a_(a), rotation_(rotation) {
    if (std::abs(a_) >= 1.0)
      throw Error(ErrorCode::InvalidAutomorphism, "automorphism parameter must satisfy |a| < 1");
    if (!std::isfinite(rotation))
      throw Error(ErrorCode::NonFiniteInput, "rotation must be finite");
  }

  Complex a() const noexcept { return a_; }
  double rotation() const noexcept { return rotation_; }

  Complex operator()(Complex w) const noexcept { return unit() * (w - a_) / (1.0 - std::conj(a_) * w); }

  Complex derivative(Complex w) const noexcept {
    const Complex d = 1.0 - std::conj(a_) * w;
    return unit() * (1.0 - std::norm(a_)) / (d * d);
  }

  Complex inverse(Complex zeta) const noexcept {
    const Complex u = std::conj(unit()) * zeta;
    return (u + a_) / (1.0 + std::conj(a_) * u);
  }

  Complex inverse_derivative(Complex zeta) const noexcept {
    const Complex u = std::conj(unit()) * zeta;
    const Complex d = 1.0 + std::conj(a_) * u;
    return std::conj(unit()) * (1.0 - std::norm(a_)) / (d * d);
  }

  /// Bounds of |eta'| over the disc: (1-|a|)/(1+|a|) and (1+|a|)/(1-|a|).
  std::pair<double, double> derivative_bounds() const noexcept {
    const double m = std::abs(a_);
    return {(1.0 - m) / (1.0 + m), (1.0 + m) / (1.0 - m)};
  }

 private:
  Complex unit() const noexcept { return std::polar(1.0, rotation_); }

  Complex a_{0.0, 0.0};
  double rotation_ = 0.0;
};

enum class MapDirection { ToDisc, FromDisc };

namespace detail {

inline constexpr Complex kI{0.0, 1.0};

// phi: Omega -> D
inline Complex to_disc(DomainFamily f, Complex z) noexcept {
  switch (f) {
    case DomainFamily::DiscIdentity: return z;
    case DomainFamily::ExteriorOfDisc: return 1.0 / z;
    case DomainFamily::UpperHalfPlane: return (z - kI) / (z + kI);
    case DomainFamily::Strip: return std::tan(z);
    case DomainFamily::Cardioid: return 2.0 * std::sqrt(z) - 1.0;
    case DomainFamily::SlitPlane: {
      const Complex t = std::sqrt(1.0 + 4.0 * z);
      return (t - 1.0) / (t + 1.0);
    }
  }
  return z;
}

inline Complex to_disc_derivative(DomainFamily f, Complex z) noexcept {
  switch (f) {
    case DomainFamily::DiscIdentity: return 1.0;
    case DomainFamily::ExteriorOfDisc: return -1.0 / (z * z);
    case DomainFamily::UpperHalfPlane: {
      const Complex d = z + kI;
      return 2.0 * kI / (d * d);
    }
    case DomainFamily::Strip: {
      const Complex t = std::tan(z);
      return 1.0 + t * t;
    }
    case DomainFamily::Cardioid: return 1.0 / std::sqrt(z);
    case DomainFamily::SlitPlane: {
      const Complex t = std::sqrt(1.0 + 4.0 * z);
      const Complex d = t + 1.0;
      return 4.0 / (t * d * d);
    }
  }
  return 1.0;
}

// psi = phi^{-1}: D -> Omega
inline Complex from_disc(DomainFamily f, Complex w) noexcept {
  switch (f) {
    case DomainFamily::DiscIdentity: return w;
    case DomainFamily::ExteriorOfDisc: return 1.0 / w;
    case DomainFamily::UpperHalfPlane: return kI * (1.0 + w) / (1.0 - w);
    case DomainFamily::Strip: return std::atan(w);
    case DomainFamily::Cardioid: {
      const Complex s = 1.0 + w;
      return 0.25 * s * s;
    }
    case DomainFamily::SlitPlane: {
      const Complex d = 1.0 - w;
      return w / (d * d);
    }
  }
  return w;
}

inline Complex from_disc_derivative(DomainFamily f, Complex w) noexcept {
  switch (f) {
    case DomainFamily::DiscIdentity: return 1.0;
    case DomainFamily::ExteriorOfDisc: return -1.0 / (w * w);
    case DomainFamily::UpperHalfPlane: {
      const Complex d = 1.0 - w;
      return 2.0 * kI / (d * d);
    }
    case DomainFamily::Strip: return 1.0 / (1.0 + w * w);
    case DomainFamily::Cardioid: return 0.5 * (1.0 + w);
    case DomainFamily::SlitPlane: {
      const Complex d = 1.0 - w;
      return (1.0 + w) / (d * d * d);
    }
  }
  return 1.0;
}

inline bool in_open_disc(DomainFamily f, Complex w) {
  if (std::norm(w) >= 1.0) return false;
  return !(f == DomainFamily::ExteriorOfDisc && w == Complex{});
}

}  // namespace detail

/// A conformal bijection between a named domain and the unit disc. When
/// ToDisc it is eta o phi (eta optional); when FromDisc it is the inverse.
class ConformalMap {
 public:
  explicit ConformalMap(DomainFamily family, MapDirection direction = MapDirection::ToDisc,
                        std::optional<MoebiusAutomorphism> post = std::nullopt)
      : family_(family), direction_(direction), post_(post) {}

  DomainFamily family() const noexcept { return family_; }
  MapDirection direction() const noexcept { return direction_; }
  const std::optional<MoebiusAutomorphism>& post_automorphism() const noexcept { return post_; }

  /// Membership of the map's source set.
  bool accepts(Complex z) const {
    if (direction_ == MapDirection::ToDisc) return contains(family_, z);
    if (std::norm(z) >= 1.0) return false;
    return detail::in_open_disc(family_, post_ ? post_->inverse(z) : z);
  }

  ComplexPoint eval(ComplexPoint z) const {
    require_source(z);
    return apply(z);
  }

  ComplexPoint derivative(ComplexPoint z) const {
    require_source(z);
    return apply_derivative(z);
  }

  ConformalMap inverse() const {
    return ConformalMap(family_,
                        direction_ == MapDirection::ToDisc ? MapDirection::FromDisc : MapDirection::ToDisc,
                        post_);
  }

  /// Unchecked evaluation for quadrature loops; the caller guarantees accepts(z).
  Complex apply(Complex z) const noexcept {
    if (direction_ == MapDirection::ToDisc) {
      const Complex w = detail::to_disc(family_, z);
      return post_ ? (*post_)(w) : w;
    }
    return detail::from_disc(family_, post_ ? post_->inverse(z) : z);
  }

  Complex apply_derivative(Complex z) const noexcept {
    if (direction_ == MapDirection::ToDisc) {
      const Complex d = detail::to_disc_derivative(family_, z);
      return post_ ? post_->derivative(detail::to_disc(family_, z)) * d : d;
    }
    if (!post_) return detail::from_disc_derivative(family_, z);
    return detail::from_disc_derivative(family_, post_->inverse(z)) * post_->inverse_derivative(z);
  }

 private:
  void require_source(Complex z) const {
    if (accepts(z)) return;
    const bool on_cut = direction_ == MapDirection::ToDisc && uses_square_root(family_) &&
                        z.imag() == 0.0 &&
                        z.real() <= (family_ == DomainFamily::SlitPlane ? -0.25 : 0.0);
    if (on_cut)
      throw Error(ErrorCode::BranchCutViolation,
                  "point lies on the excluded ray of the " + std::string(family_name(family_)) + " map");
    throw Error(ErrorCode::PointOutsideDomain,
                "point outside the source set of the " + std::string(family_name(family_)) + " map");
  }

  DomainFamily family_;
  MapDirection direction_;
  std::optional<MoebiusAutomorphism> post_;
};

/// eta o map. Composing onto a map that already carries an automorphism
/// folds both into one disc automorphism.
inline ConformalMap compose_with_automorphism(const ConformalMap& map, const MoebiusAutomorphism& eta) {
  if (map.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "automorphisms compose onto ToDisc maps only");
  if (!map.post_automorphism()) return ConformalMap(map.family(), MapDirection::ToDisc, eta);
  // eta2 o eta1 is again a Moebius automorphism; recover (a, rotation) from
  // its zero and its value at one other point.
  const auto& first = *map.post_automorphism();
  const Complex zero = first.inverse(eta.a());
  const MoebiusAutomorphism partial(zero, 0.0);
  const Complex probe = std::abs(zero) < 0.25 ? Complex(0.5, 0.0) : Complex(0.0, 0.0);
  const double rotation = std::arg(eta(first(probe)) / partial(probe));
  return ConformalMap(map.family(), MapDirection::ToDisc, MoebiusAutomorphism(zero, rotation));
}

/// Interior points at distance `offset` from the boundary, obtained by
/// moving along the inward normal of an explicit boundary parametrization.
inline std::vector<Complex> boundary_samples(DomainFamily f, int n, double offset) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  const double pi = std::numbers::pi;
  // spreads the unbounded boundary lines over (-inf, inf)
  auto line_coord = [&](int j) { return std::tan(pi * ((j + 0.5) / n - 0.5) * 0.98); };
  for (int j = 0; j < n; ++j) {
    const double th = -pi + 2.0 * pi * (j + 0.5) / n;
    Complex z;
    switch (f) {
      case DomainFamily::DiscIdentity: z = std::polar(1.0 - offset, th); break;
      case DomainFamily::ExteriorOfDisc: z = std::polar(1.0 + offset, th); break;
      case DomainFamily::UpperHalfPlane: z = {line_coord(j), offset}; break;
      case DomainFamily::Strip: {
        const double side = (j % 2 == 0) ? 1.0 : -1.0;
        z = {side * (pi / 4 - offset), line_coord(j)};
        break;
      }
      case DomainFamily::Cardioid: {
        // equal arc-length spacing: s(th) = 2 sin(th/2) on [-pi, pi]
        const double th = 2.0 * std::asin(-1.0 + 2.0 * (j + 0.5) / n);
        const double rho = 0.5 * (1.0 + std::cos(th));
        const double drho = -0.5 * std::sin(th);
        const Complex tangent = Complex(drho, rho) * std::polar(1.0, th);
        const Complex outward = -detail::kI * tangent / std::abs(tangent);
        z = std::polar(rho, th) - offset * outward;
        break;
      }
      case DomainFamily::SlitPlane: {
        const double t = std::exp(-6.0 + 12.0 * (j / 2 + 0.5) / ((n + 1) / 2));
        const double side = (j % 2 == 0) ? 1.0 : -1.0;
        z = {-0.25 - t, side * offset};
        break;
      }
    }
    if (contains(f, z)) out.push_back(z);
  }
  return out;
}

/// Max of ||phi(z)| - 1| over boundary samples of `domain` pulled inside by
/// each of the offsets 1e-3, 1e-4, 1e-5, 1e-6. Works for any callable phi so
/// candidate formulas can be screened without building a ConformalMap.
template <class Phi>
double boundary_image_deviation(DomainFamily domain, Phi&& phi, int n, double max_offset = 1e-3) {
  if (n < 8) throw Error(ErrorCode::InvalidGrid, "boundary_image_check needs n >= 8");
  double worst = 0.0;
  for (double offset = max_offset; offset >= 0.999e-6; offset *= 0.1)
    for (const Complex z : boundary_samples(domain, n, offset))
      worst = std::max(worst, std::abs(std::abs(Complex(phi(z))) - 1.0));
  return worst;
}

inline double boundary_image_check(const ConformalMap& map, int n, double max_offset = 1e-3) {
  if (map.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "boundary_image_check requires a ToDisc map");
  return boundary_image_deviation(map.family(), [&](Complex z) { return map.apply(z); }, n, max_offset);
}

}  // namespace confw
