#pragma once

// The invariant suite behind `cw verify`. Every check records the measured
// quantities next to its threshold; the report contains no timings so that
// repeated runs are byte-identical.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/disc_field.hpp"
#include "confw/embedding_lab.hpp"
#include "confw/poisson_transfer.hpp"
#include "confw/quadrature.hpp"
#include "confw/reference.hpp"
#include "confw/weight_engine.hpp"

namespace confw::verify {

using json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool passed = false;
  json details = json::object();
};

namespace detail {

inline std::string fam(DomainFamily f) { return std::string(family_name(f)); }

inline std::string format_offset(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "offset_%.0e", x);
  return buf;
}

// Interior samples as (w, z = psi(w)) pairs, so a local length scale
// (1 - |w|^2)|psi'(w)| (comparable to the boundary distance) is available.
struct Sample {
  Complex w, z;
  double scale;
};

inline std::vector<Sample> samples(DomainFamily f, std::size_t n, std::uint64_t seed) {
  const ConformalMap phi(f);
  const ConformalMap psi = phi.inverse();
  std::vector<Sample> out;
  for (const Complex z : sample_interior(phi, n, seed)) {
    const Complex w = phi.apply(z);
    out.push_back({w, z, (1.0 - std::norm(w)) * std::abs(psi.apply_derivative(w)) / 4.0});
  }
  return out;
}

}  // namespace detail

inline Check check_reference_weight_formulas(std::uint64_t seed) {
  Check c{"weights.closed_form_examples"};
  double worst_ext = 0.0, worst_half = 0.0;
  const WeightField ext{ConformalMap(DomainFamily::ExteriorOfDisc)};
  const WeightField half{ConformalMap(DomainFamily::UpperHalfPlane)};
  for (const Complex z : sample_interior(ext.map(), 100, seed))
    worst_ext = std::max(worst_ext, std::abs(ext(z) - reference::exterior_h(z)));
  for (const Complex z : sample_interior(half.map(), 100, seed + 1))
    worst_half = std::max(worst_half, std::abs(half(z) - reference::halfplane_h(z)));
  c.details = {{"exterior_max_abs_error", worst_ext}, {"halfplane_max_abs_error", worst_half}, {"threshold", 1e-12}};
  c.passed = worst_ext <= 1e-12 && worst_half <= 1e-12;
  return c;
}

/// The strip weight is computed from h = |phi'|^2 with phi = tan z and
/// compared with the printed formula; the mismatch is the expected outcome.
inline Check check_strip_printed_formula() {
  Check c{"weights.strip_printed_formula_mismatch"};
  const WeightField w{ConformalMap(DomainFamily::Strip)};
  const Complex z{0.5, 0.0};
  const double computed = w(z);
  const double sec2 = 1.0 / (std::cos(0.5) * std::cos(0.5));
  const double printed = reference::strip_h_printed(z);
  const double printed_compact = reference::strip_h_printed_compact(z);
  c.details = {{"z", "0.5"},
               {"computed_h", computed},
               {"analytic_sec_pow4", sec2 * sec2},
               {"printed_h_expanded", printed},
               {"printed_h_compact", printed_compact},
               {"mismatch_reproduced", std::abs(computed - printed) > 1e-3}};
  c.passed = std::abs(computed - sec2 * sec2) <= 1e-12 * sec2 * sec2 && std::abs(computed - printed) > 1e-3;
  return c;
}

inline Check check_cardioid_printed_formula() {
  Check c{"weights.cardioid_printed_formula_mismatch"};
  const Complex z{0.0625, 0.0};
  const double printed_map_h = reference::cardioid_printed_map_h(z);
  const double printed_h = reference::cardioid_h_printed(z);
  const double shipped_h = WeightField{ConformalMap(DomainFamily::Cardioid)}(z);
  const double printed_dev = boundary_image_deviation(DomainFamily::Cardioid, reference::cardioid_phi_printed, 64);
  const double shipped_dev = boundary_image_check(ConformalMap(DomainFamily::Cardioid), 64);
  c.details = {{"z", "0.0625"},
               {"printed_map_h", printed_map_h},
               {"printed_h", printed_h},
               {"shipped_map", "2 sqrt(z) - 1"},
               {"shipped_map_h", shipped_h},
               {"printed_map_boundary_deviation", printed_dev},
               {"shipped_map_boundary_deviation", shipped_dev}};
  c.passed = std::abs(printed_map_h - 4.0) <= 1e-12 && std::abs(printed_h - 2.0) <= 1e-12 &&
             std::abs(shipped_h - 16.0) <= 1e-12 && printed_dev > 0.4 && shipped_dev < 1e-2;
  return c;
}

inline Check check_map_analyticity(std::uint64_t seed) {
  Check c{"maps.analyticity_and_jacobian"};
  double worst_diff = 0.0, worst_jac = 0.0;
  for (auto f : kAllFamilies) {
    const ConformalMap phi(f);
    for (const auto& s : detail::samples(f, 200, seed)) {
      const double eps = 1e-5 * s.scale;
      const Complex d = phi.apply_derivative(s.z);
      const Complex fx = (phi.apply(s.z + eps) - phi.apply(s.z - eps)) / (2.0 * eps);
      const Complex fy = (phi.apply(s.z + Complex(0, eps)) - phi.apply(s.z - Complex(0, eps))) / (2.0 * eps);
      worst_diff = std::max(worst_diff, std::abs(fx - d) / std::abs(d));
      const double jac = fx.real() * fy.imag() - fy.real() * fx.imag();
      worst_jac = std::max(worst_jac, std::abs(jac - std::norm(d)) / std::norm(d));
    }
  }
  c.details = {{"max_rel_difference_quotient_error", worst_diff},
               {"difference_threshold", 1e-7},
               {"max_rel_jacobian_error", worst_jac},
               {"jacobian_threshold", 1e-6}};
  c.passed = worst_diff <= 1e-7 && worst_jac <= 1e-6;
  return c;
}

inline Check check_round_trip(std::uint64_t seed) {
  Check c{"maps.round_trip"};
  double worst = 0.0;
  for (auto f : kAllFamilies) {
    const ConformalMap phi(f);
    const ConformalMap psi = phi.inverse();
    for (const Complex z : sample_interior(phi, 200, seed))
      worst = std::max(worst, std::abs(psi.apply(phi.apply(z)) - z) / std::max(1.0, std::abs(z)));
  }
  c.details = {{"max_error", worst}, {"threshold", 1e-12}};
  c.passed = worst <= 1e-12;
  return c;
}

/// ||phi| - 1| at each normal offset separately. Near a boundary point where
/// phi' blows up (cardioid cusp, slit tip) the deviation is about
/// offset * |phi'| and can exceed the threshold at the coarsest offset.
inline Check check_boundary_image() {
  Check c{"maps.boundary_image"};
  c.passed = true;
  for (auto f : kAllFamilies) {
    const ConformalMap phi(f);
    json row = json::object();
    for (double offset : {1e-3, 1e-4, 1e-5, 1e-6}) {
      double worst = 0.0;
      for (const Complex z : boundary_samples(f, 64, offset))
        worst = std::max(worst, std::abs(std::abs(phi.apply(z)) - 1.0));
      row[detail::format_offset(offset)] = worst;
      if (offset == 1e-3) c.passed = c.passed && worst < 1e-2;
    }
    c.details[detail::fam(f)] = row;
  }
  c.details["threshold_at_offset_1e-3"] = 1e-2;
  return c;
}

inline Check check_weight_positivity(std::uint64_t seed) {
  Check c{"weights.positivity"};
  double smallest = std::numeric_limits<double>::infinity();
  for (auto f : kAllFamilies) {
    const WeightField w{ConformalMap(f)};
    for (const Complex z : sample_interior(w.map(), 10000, seed)) smallest = std::min(smallest, w.eval_unchecked(z));
  }
  c.details = {{"min_h", smallest}, {"samples_per_family", 10000}};
  c.passed = smallest > 0.0;
  return c;
}

inline Check check_mass_identity() {
  Check c{"weights.mass_identity"};
  c.passed = true;
  for (auto f : kAllFamilies) {
    const QuadResult q = weight_mass(WeightField{ConformalMap(f)}, {}, 6);
    const double rel = std::abs(q.level_values.back() - std::numbers::pi) / std::numbers::pi;
    c.details[detail::fam(f)] = {{"value", q.level_values.back()}, {"rel_error", rel}};
    c.passed = c.passed && rel <= 1e-4;
  }
  c.details["threshold"] = 1e-4;
  return c;
}

inline Check check_weight_equivalence(std::uint64_t seed) {
  Check c{"weights.equivalence_bounds"};
  c.details = json::array();
  c.passed = true;
  const ConformalMap base(DomainFamily::UpperHalfPlane);
  const WeightField w1{base};
  const std::pair<double, double> cases[] = {{0.0, std::numbers::pi}, {0.5, 0.3}, {0.9, -1.1}};
  for (const auto& [a, rot] : cases) {
    const WeightField w2{compose_with_automorphism(base, MoebiusAutomorphism({a, 0.0}, rot))};
    const auto rep = weight_equivalence_check(w1, w2, 500, seed);
    c.details.push_back({{"a", a},
                         {"rotation", rot},
                         {"min_ratio", rep.min_ratio},
                         {"max_ratio", rep.max_ratio},
                         {"lower_bound", rep.lower_bound},
                         {"upper_bound", rep.upper_bound}});
    c.passed = c.passed && rep.within_bounds();
  }
  return c;
}

inline Check check_weight_class() {
  Check c{"weights.vp_class"};
  const auto r1 = weight_class_check(WeightField{ConformalMap(DomainFamily::UpperHalfPlane)}, 2.0, {-1, 1, 1, 2});
  const auto r2 = weight_class_check(WeightField{ConformalMap(DomainFamily::ExteriorOfDisc)}, 3.0, {2, 3, 2, 3});
  const auto r3 = weight_class_check(WeightField{ConformalMap(DomainFamily::Cardioid)}, 1.0, {0.2, 0.6, -0.2, 0.2});
  c.details = json::array();
  for (const auto* r : {&r1, &r2, &r3})
    c.details.push_back({{"p", r->p}, {"rect", r->compact_set}, {"integral", r->integral_value}, {"in_class", r->in_class}});
  c.passed = r1.in_class && r2.in_class && r3.in_class;
  return c;
}

inline json quad_json(const QuadResult& q) {
  return {{"value", q.value},
          {"verdict", to_string(q.verdict)},
          {"levels_used", q.levels_used},
          {"increment_ratio", q.increment_ratio},
          {"extrapolated", q.extrapolated}};
}

inline Check check_koebe_brennan_range() {
  Check c{"quadrature.koebe_brennan_range"};
  c.details = json::array();
  c.passed = true;
  const ConformalMap koebe(DomainFamily::SlitPlane);
  for (double s : {1.3, 1.5, 2.0, 2.5, 3.0, 3.5, 3.9, 4.1}) {
    const QuadResult q = brennan_direct(koebe, s);
    const Verdict expected = reference::koebe_brennan_finite(s) ? Verdict::Converged : Verdict::Divergent;
    json row = quad_json(q);
    row["s"] = s;
    row["expected"] = to_string(expected);
    c.details.push_back(row);
    c.passed = c.passed && q.verdict == expected;
  }
  for (double a : {-1.9, 0.7}) {
    const QuadResult q = inverse_brennan(koebe, a);
    const Verdict expected = reference::koebe_brennan_finite(2.0 - a) ? Verdict::Converged : Verdict::Divergent;
    json row = quad_json(q);
    row["alpha"] = a;
    row["expected"] = to_string(expected);
    c.details.push_back(row);
    c.passed = c.passed && q.verdict == expected;
  }
  return c;
}

inline Check check_quadrature_determinism() {
  Check c{"quadrature.deterministic_reduction"};
  const ConformalMap koebe(DomainFamily::SlitPlane);
  const QuadResult a = brennan_direct(koebe, 3.0, {}, 5);
  const QuadResult b = brennan_direct(koebe, 3.0, {}, 5);
  c.passed = a.level_values == b.level_values;
  c.details = {{"bit_identical", c.passed}};
  return c;
}

inline Check check_kpq() {
  Check c{"quadrature.kpq"};
  const QuadResult card = kpq_norm(ConformalMap(DomainFamily::Cardioid), 2.0, 1.0);
  const double oracle = std::sqrt(reference::cardioid_area());
  const double rel = std::abs(card.value - oracle) / oracle;
  const QuadResult ext = kpq_norm(ConformalMap(DomainFamily::ExteriorOfDisc), 2.0, 1.0);
  c.details = {{"cardioid_K", card.value},
               {"oracle", oracle},
               {"rel_error", rel},
               {"threshold", 1e-4},
               {"exterior_verdict", to_string(ext.verdict)}};
  c.passed = card.verdict == Verdict::Converged && rel <= 1e-4 && ext.verdict == Verdict::Divergent;
  return c;
}

inline Check check_composition(std::uint64_t seed) {
  Check c{"disc_field.composition_inequality"};
  const auto bumps = random_bumps(20, seed);
  const auto rep = composition_inequality_check(ConformalMap(DomainFamily::Cardioid), 2.0, 1.5, bumps);
  double worst = 0.0;
  bool all = true;
  for (const auto& b : rep) {
    worst = std::max(worst, b.lhs / b.rhs);
    all = all && b.passed;
  }
  c.details = {{"bumps", rep.size()}, {"K", rep.front().constant}, {"max_lhs_over_rhs", worst}};
  c.passed = all;
  return c;
}

inline Check check_isometry(std::uint64_t seed) {
  Check c{"disc_field.isometry"};
  c.passed = true;
  const auto bumps = random_bumps(5, seed);
  for (auto f : kAllFamilies) {
    const double dev = isometry_check(ConformalMap(f), bumps);
    c.details[detail::fam(f)] = dev;
    c.passed = c.passed && dev <= 1e-6;
  }
  c.details["threshold"] = 1e-6;
  return c;
}

inline Check check_norm_homogeneity(std::uint64_t seed) {
  Check c{"disc_field.norm_homogeneity"};
  const PolarGrid g{64, 64};
  const auto b = random_bumps(1, seed).front();
  const DiscField f = DiscField::sample(g, [&](Complex w) { return b.value(w) + w.real(); });
  double worst = 0.0;
  for (double p : {1.0, 2.0, 3.5})
    for (double k : {-3.0, 0.5, 7.0}) {
      const double lhs = lp_norm(f.scaled(k), p), rhs = std::abs(k) * lp_norm(f, p);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
  c.details = {{"max_rel_deviation", worst}, {"threshold", 1e-14}};
  c.passed = worst <= 1e-14;
  return c;
}

inline Check check_poincare() {
  Check c{"embedding.poincare_disc"};
  const double j01 = reference::bessel_j0_first_zero();
  std::vector<double> errors;
  json levels = json::array();
  double k256 = 0.0;
  for (int n : {32, 64, 128, 256}) {
    const auto est = poincare_constant_disc(2.0, PolarGrid{n, n});
    errors.push_back(std::abs(est.eigenvalue - j01 * j01));
    levels.push_back({{"n", n}, {"lambda", est.eigenvalue}, {"K", est.value}, {"iterations", est.iterations}});
    if (n == 256) k256 = est.value;
  }
  bool monotone = true;
  for (std::size_t k = 1; k < errors.size(); ++k) monotone = monotone && errors[k] < errors[k - 1];
  const double order = std::log2(errors[errors.size() - 2] / errors.back());
  const double rel = std::abs(k256 - 1.0 / j01) * j01;
  c.details = {{"j01_bisection", j01}, {"oracle_K", 1.0 / j01}, {"levels", levels}, {"rel_error_256", rel},
               {"order_128_256", order}, {"monotone_toward_oracle", monotone}};
  c.passed = rel <= 0.01 && monotone && order >= 1.9;
  return c;
}

inline Check check_transfer_identities(std::uint64_t seed) {
  Check c{"embedding.weighted_transfer"};
  c.passed = true;
  const auto bumps = random_bumps(5, seed);
  const double k2 = poincare_constant_disc(2.0, PolarGrid{256, 256}).value;
  for (auto f : kAllFamilies) {
    const auto r3 = weighted_constant_check(ConformalMap(f), 3.0, bumps);
    const auto r2 = weighted_constant_check(ConformalMap(f), 2.0, bumps);
    c.details[detail::fam(f)] = {{"mismatch_r3", r3.max_mismatch},
                                 {"mismatch_r2", r2.max_mismatch},
                                 {"max_ratio_r2", r2.max_ratio}};
    c.passed = c.passed && r3.max_mismatch <= 1e-6 && r2.max_mismatch <= 1e-6 && r2.max_ratio <= k2 * (1.0 + 1e-4);
  }
  c.details["K_r2"] = k2;
  return c;
}

inline Check check_exponent_algebra() {
  Check c{"embedding.exponent_algebra"};
  int violations = 0, cases = 0;
  for (int i = 0; i < 20; ++i) {
    const double a0 = -2.0 + 1.9 * (i + 0.5) / 20.0;  // (-2, -0.1)
    const double lo = p_min(a0);
    for (int j = 0; j < 20; ++j) {
      const double p = lo + (2.0 - lo) * (j + 0.5) / 20.0;
      const auto b = exponent_bounds(p, a0);
      ++cases;
      const bool chain = 1.0 <= b.q_max && b.q_max < b.q_ceiling && b.q_ceiling < p && p < 2.0 && b.r_max < b.r_ceiling;
      if (!chain) ++violations;
    }
  }
  double endpoint_gap = 0.0;
  for (double p : {1.4, 1.5, 1.7, 1.9}) {
    const auto b = exponent_bounds(p, kConjecturedAlpha0);
    endpoint_gap = std::max(endpoint_gap, std::abs(b.q_max - b.q_ceiling));
  }
  double q2_gap = 0.0;
  for (double p : {2.5, 3.0, 4.0, 10.0, 100.0}) q2_gap = std::max(q2_gap, std::abs(q_from_ps(p, 2.0) - 2.0));
  c.details = {{"grid_cases", cases}, {"chain_violations", violations}, {"endpoint_max_gap", endpoint_gap},
               {"q_at_s2_max_gap", q2_gap}};
  c.passed = violations == 0 && endpoint_gap <= 1e-15 && q2_gap <= 1e-15;
  return c;
}

inline Check check_dirichlet_solver(std::uint64_t seed) {
  Check c{"poisson.transfer_solver"};
  c.passed = true;
  const auto bumps = random_bumps(5, seed);
  for (auto f : kAllFamilies) {
    const DirichletProblem prob{ConformalMap(f), Rhs::constant(-4.0)};
    const double e128 = max_error_vs_exact(solve(prob, PolarGrid{128, 128}), prob.rhs);
    const DiscSolution s256 = solve(prob, PolarGrid{256, 256});
    const double e256 = max_error_vs_exact(s256, prob.rhs);
    const double order = std::log2(e128 / e256);
    std::vector<double> res;
    for (int n : {64, 128, 256}) res.push_back(weak_residual(solve(prob, PolarGrid{n, n}), prob, bumps).max_residual);
    const double res_order = std::min(std::log2(res[0] / res[1]), std::log2(res[1] / res[2]));
    c.details[detail::fam(f)] = {{"max_error_256", e256}, {"order_128_256", order}, {"residuals", res},
                                 {"min_residual_order", res_order}};
    c.passed = c.passed && e256 <= 1e-3 && order >= 1.9 && res_order >= 1.9;
  }
  const ConformalMap strip(DomainFamily::Strip);
  const auto quartic = convergence_study({strip, Rhs::quartic()}, 4);
  json q = json::array();
  for (const auto& lv : quartic) {
    q.push_back({{"n", lv.n}, {"error", lv.error}, {"order", lv.order}});
    if (std::isfinite(lv.order)) c.passed = c.passed && lv.order >= 1.9;
  }
  c.details["strip_quartic"] = q;
  // linearity and reproducibility
  const PolarGrid g{64, 64};
  const DiscSolution a = solve({strip, Rhs::quartic()}, g);
  const DiscSolution b = solve({strip, Rhs::quartic()}, g);
  const DiscSolution zero = solve({strip, Rhs::constant(0.0)}, g);
  const DiscSolution pos = solve({strip, Rhs::constant(3.0)}, g);
  const DiscSolution neg = solve({strip, Rhs::constant(-3.0)}, g);
  bool identical = true, odd = true, zeros = true;
  for (std::size_t k = 0; k < g.size(); ++k) {
    identical = identical && a.v.values()[k] == b.v.values()[k];
    odd = odd && pos.v.values()[k] == -neg.v.values()[k];
    zeros = zeros && zero.v.values()[k] == 0.0;
  }
  c.details["bit_identical_resolve"] = identical;
  c.details["linear_in_rhs"] = odd;
  c.details["zero_rhs_zero_solution"] = zeros;
  c.passed = c.passed && identical && odd && zeros;
  return c;
}

inline std::vector<Check> run_all(std::uint64_t seed) {
  std::vector<Check> out;
  out.push_back(check_reference_weight_formulas(seed));
  out.push_back(check_strip_printed_formula());
  out.push_back(check_cardioid_printed_formula());
  out.push_back(check_map_analyticity(seed));
  out.push_back(check_round_trip(seed));
  out.push_back(check_boundary_image());
  out.push_back(check_weight_positivity(seed));
  out.push_back(check_mass_identity());
  out.push_back(check_weight_equivalence(seed));
  out.push_back(check_weight_class());
  out.push_back(check_koebe_brennan_range());
  out.push_back(check_quadrature_determinism());
  out.push_back(check_kpq());
  out.push_back(check_composition(seed));
  out.push_back(check_isometry(seed));
  out.push_back(check_norm_homogeneity(seed));
  out.push_back(check_poincare());
  out.push_back(check_transfer_identities(seed));
  out.push_back(check_exponent_algebra());
  out.push_back(check_dirichlet_solver(seed));
  return out;
}

inline json to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"details", c.details}});
    all = all && c.passed;
  }
  return {{"checks", arr}, {"all_passed", all}};
}

}  // namespace confw::verify
