#pragma once

// Dirichlet problem  Lap u = f h  in Omega,  u = 0 on the boundary, solved by
// transfer to the disc: v = u o psi satisfies Lap v = f o psi, because
// Lap(u o psi) = |psi'|^2 (Lap u) o psi and h(psi) |psi'|^2 = 1.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/disc_field.hpp"
#include "confw/error.hpp"

namespace confw {

/// Right-hand side f on Omega, given in closed form.
class Rhs {
 public:
  enum class Kind { Constant, Quartic, Custom };

  static Rhs constant(double c) { return Rhs(Kind::Constant, c, {}); }
  /// f = 16 |phi|^2 - 8, whose solution is (1 - |phi|^2)^2.
  static Rhs quartic() { return Rhs(Kind::Quartic, 0.0, {}); }
  static Rhs custom(std::function<double(Complex)> f) { return Rhs(Kind::Custom, 0.0, std::move(f)); }

  /// "const:<c>" or "quartic".
  static Rhs parse(std::string_view text) {
    if (text == "quartic") return quartic();
    if (text.rfind("const:", 0) == 0) {
      const std::string num(text.substr(6));
      std::size_t used = 0;
      double c = 0.0;
      try {
        c = std::stod(num, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == num.size() && used > 0 && std::isfinite(c)) return constant(c);
    }
    throw Error(ErrorCode::UnknownName, "rhs must be 'const:<number>' or 'quartic', got '" + std::string(text) + "'");
  }

  Kind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return c_; }

  std::string describe() const {
    switch (kind_) {
      case Kind::Constant: {
        std::ostringstream os;
        os.precision(17);
        os << "const:" << c_;
        return os.str();
      }
      case Kind::Quartic: return "quartic";
      case Kind::Custom: return "custom";
    }
    return "?";
  }

  /// f(z) at a point of Omega; `w` is phi(z), which the manufactured case uses.
  double operator()(Complex z, Complex w) const {
    switch (kind_) {
      case Kind::Constant: return c_;
      case Kind::Quartic: return 16.0 * std::norm(w) - 8.0;
      case Kind::Custom: return fn_(z);
    }
    return 0.0;
  }

  /// Exact u as a function of w = phi(z), when known.
  std::optional<double> exact(Complex w) const {
    const double s = std::norm(w);
    switch (kind_) {
      case Kind::Constant: return c_ * (s - 1.0) / 4.0;
      case Kind::Quartic: return (1.0 - s) * (1.0 - s);
      case Kind::Custom: return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  Rhs(Kind k, double c, std::function<double(Complex)> fn) : kind_(k), c_(c), fn_(std::move(fn)) {}

  Kind kind_;
  double c_;
  std::function<double(Complex)> fn_;
};

struct DirichletProblem {
  ConformalMap map;  ///< ToDisc
  Rhs rhs;
};

/// Fast solver for Lap v = g on the disc with v = 0 on the unit circle:
/// FFT in theta, then one tridiagonal system per Fourier mode.
class DiscPoissonSolver {
 public:
  explicit DiscPoissonSolver(PolarGrid grid) : grid_(grid) {
    if (grid.n_theta < 4 || (grid.n_theta & (grid.n_theta - 1)) != 0)
      throw Error(ErrorCode::InvalidGrid, "n_theta must be a power of two");
    if (grid.n_r < 2) throw Error(ErrorCode::InvalidGrid, "n_r must be >= 2");
    const int n = grid.n_theta;
    real_.reset(fftw_alloc_real(static_cast<std::size_t>(n)));
    spec_.reset(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
    forward_ = fftw_plan_dft_r2c_1d(n, real_.get(), spec_.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  DiscPoissonSolver(const DiscPoissonSolver&) = delete;
  DiscPoissonSolver& operator=(const DiscPoissonSolver&) = delete;
  ~DiscPoissonSolver() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  const PolarGrid& grid() const noexcept { return grid_; }

  /// v with Lap_h v = g (g sampled on the grid nodes).
  DiscField solve(std::span<const double> g) const {
    const int nr = grid_.n_r, nt = grid_.n_theta, modes = nt / 2 + 1;
    std::vector<std::complex<double>> coeff(static_cast<std::size_t>(nr) * modes);
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) real_.get()[j] = g[grid_.index(i, j)];
      fftw_execute(forward_);
      for (int m = 0; m < modes; ++m)
        coeff[static_cast<std::size_t>(i) * modes + m] = {spec_.get()[m][0], spec_.get()[m][1]};
    }
    std::vector<std::complex<double>> rhs(static_cast<std::size_t>(nr)), sol;
    for (int m = 0; m < modes; ++m) {
      for (int i = 0; i < nr; ++i) rhs[i] = coeff[static_cast<std::size_t>(i) * modes + m];
      sol = solve_mode(m, rhs);
      for (int i = 0; i < nr; ++i) coeff[static_cast<std::size_t>(i) * modes + m] = sol[i];
    }
    std::vector<double> v(grid_.size());
    for (int i = 0; i < nr; ++i) {
      for (int m = 0; m < modes; ++m) {
        const auto c = coeff[static_cast<std::size_t>(i) * modes + m];
        spec_.get()[m][0] = c.real();
        spec_.get()[m][1] = c.imag();
      }
      fftw_execute(backward_);
      for (int j = 0; j < nt; ++j) v[grid_.index(i, j)] = real_.get()[j] / nt;
    }
    return DiscField(grid_, std::move(v));
  }

  /// Radial operator of mode m on cell-centred nodes r_i = (i+1/2)h:
  /// (r_{i+1/2}(v_{i+1}-v_i) - r_{i-1/2}(v_i-v_{i-1})) / (r_i h^2) - m^2 v_i / r_i^2,
  /// with r_{-1/2} = 0 and the ghost value v_N = -v_{N-1} (zero at r = 1).
  std::vector<std::complex<double>> solve_mode(int m, std::span<const std::complex<double>> rhs) const {
    const int n = grid_.n_r;
    const double h = grid_.dr();
    std::vector<double> lower(n), diag(n), upper(n);
    for (int i = 0; i < n; ++i) {
      const double r = grid_.r(i);
      const double rm = i == 0 ? 0.0 : r - 0.5 * h;
      const double rp = r + 0.5 * h;
      lower[i] = rm / (r * h * h);
      upper[i] = rp / (r * h * h);
      diag[i] = -(rm + rp) / (r * h * h) - double(m) * m / (r * r);
    }
    diag[n - 1] -= upper[n - 1];
    upper[n - 1] = 0.0;
    // Thomas algorithm
    std::vector<double> c(n);
    std::vector<std::complex<double>> d(n);
    double beta = diag[0];
    if (beta == 0.0) throw Error(ErrorCode::SingularTridiagonal, "zero pivot in radial solve");
    c[0] = upper[0] / beta;
    d[0] = rhs[0] / beta;
    for (int i = 1; i < n; ++i) {
      beta = diag[i] - lower[i] * c[i - 1];
      if (beta == 0.0) throw Error(ErrorCode::SingularTridiagonal, "zero pivot in radial solve");
      c[i] = upper[i] / beta;
      d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
    }
    for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
    return d;
  }

 private:
  struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
  };

  PolarGrid grid_;
  std::unique_ptr<double, FftwFree> real_;
  std::unique_ptr<fftw_complex, FftwFree> spec_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Bilinear interpolation of a disc field at w, periodic in theta; v is
/// continued linearly to 0 at r = 1 and to the ring mean at r = 0.
inline double interpolate(const DiscField& f, Complex w) {
  const PolarGrid& g = f.grid();
  const double r = std::abs(w);
  if (r >= 1.0) return 0.0;
  double th = std::arg(w);
  if (th < 0.0) th += 2.0 * std::numbers::pi;
  const double tj = th / g.dtheta();
  const int j0 = static_cast<int>(std::floor(tj)) % g.n_theta;
  const int j1 = (j0 + 1) % g.n_theta;
  const double ft = tj - std::floor(tj);
  auto ring = [&](int i) { return (1.0 - ft) * f.at(i, j0) + ft * f.at(i, j1); };
  const double ri = r * g.n_r - 0.5;  // fractional node index
  if (ri <= 0.0) {
    double mean = 0.0;
    for (int j = 0; j < g.n_theta; ++j) mean += f.at(0, j);
    mean /= g.n_theta;
    const double s = r / g.r(0);
    return (1.0 - s) * mean + s * ring(0);
  }
  if (ri >= g.n_r - 1) {
    const double s = (r - g.r(g.n_r - 1)) / (1.0 - g.r(g.n_r - 1));
    return (1.0 - s) * ring(g.n_r - 1);
  }
  const int i0 = static_cast<int>(ri);
  const double fr = ri - i0;
  return (1.0 - fr) * ring(i0) + fr * ring(i0 + 1);
}

struct DiscSolution {
  DiscField v;
  ConformalMap map;

  const PolarGrid& grid() const noexcept { return v.grid(); }

  /// u(z) = v(phi(z)).
  double u(ComplexPoint z) const { return interpolate(v, map.eval(z).value()); }
};

/// Solve by transfer; the disc right-hand side is f(psi(w)) at every node.
inline DiscSolution solve(const DirichletProblem& problem, const PolarGrid& grid) {
  if (problem.map.direction() != MapDirection::ToDisc)
    throw Error(ErrorCode::DomainMismatch, "the Dirichlet problem needs a ToDisc map");
  const ConformalMap psi = problem.map.inverse();
  std::vector<double> g(grid.size());
  for (int i = 0; i < grid.n_r; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      const Complex w = grid.node(i, j);
      const double val = problem.rhs(psi.apply(w), w);
      if (!std::isfinite(val)) throw Error(ErrorCode::RhsNotFinite, "rhs is not finite at a pulled-back node");
      g[grid.index(i, j)] = val;
    }
  DiscPoissonSolver solver(grid);
  return DiscSolution{solver.solve(g), problem.map};
}

/// Max over nodes pushed forward to Omega of |u(z) - exact(z)|.
inline double max_error_vs_exact(const DiscSolution& sol, const Rhs& rhs) {
  const PolarGrid& g = sol.grid();
  const ConformalMap psi = sol.map.inverse();
  double worst = 0.0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      const Complex w = g.node(i, j);
      if (!psi.accepts(w)) continue;
      const Complex z = psi.apply(w);
      if (!sol.map.accepts(z)) continue;
      const Complex wz = sol.map.apply(z);
      const auto exact = rhs.exact(wz);
      if (!exact) throw Error(ErrorCode::InvalidArgument, "no closed-form solution for this rhs");
      worst = std::max(worst, std::abs(interpolate(sol.v, wz) - *exact));
    }
  return worst;
}

struct ResidualReport {
  std::vector<double> residuals;
  double max_residual = 0.0;
};

/// |<grad v, grad b>_D + int_D (f o psi) b dmu| for each test bump b, i.e.
/// the weak form [u, b o phi] + <f, b o phi>_h of Lap u = f h.
inline ResidualReport weak_residual(const DiscSolution& sol, const DirichletProblem& problem,
                                    std::span<const TestBump> bumps) {
  const PolarGrid& g = sol.grid();
  const VectorField grad = gradient(sol.v);
  const ConformalMap psi = problem.map.inverse();
  std::vector<double> ftilde(g.size());
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      const Complex w = g.node(i, j);
      ftilde[g.index(i, j)] = problem.rhs(psi.apply(w), w);
    }
  ResidualReport rep;
  std::vector<double> ring(static_cast<std::size_t>(g.n_theta)), rings(static_cast<std::size_t>(g.n_r));
  for (const auto& b : bumps) {
    for (int i = 0; i < g.n_r; ++i) {
      for (int j = 0; j < g.n_theta; ++j) {
        const Complex w = g.node(i, j);
        const auto k = g.index(i, j);
        const Complex gb = b.gradient(w);
        ring[j] = grad.x[k] * gb.real() + grad.y[k] * gb.imag() + ftilde[k] * b.value(w);
      }
      rings[i] = pairwise_sum(ring) * cell_area(g, i);
    }
    rep.residuals.push_back(std::abs(pairwise_sum(rings)));
  }
  for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

struct ConvergenceLevel {
  int n = 0;           ///< n_r = n_theta
  double error = 0.0;  ///< max error vs exact solution or vs the finest level
  double order = std::numeric_limits<double>::quiet_NaN();  ///< log2(e_{k-1}/e_k)
};

/// Errors on grids base, 2 base, ... When the rhs has a closed-form
/// solution the error is measured against it; otherwise level k is compared
/// with level k + 1 on its own nodes (the last level then has no entry).
inline std::vector<ConvergenceLevel> convergence_study(const DirichletProblem& problem, int levels, int base = 32) {
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "convergence_study needs levels >= 3");
  std::vector<DiscSolution> sols;
  std::vector<ConvergenceLevel> out;
  for (int k = 0; k < levels; ++k) {
    const int n = base << k;
    sols.push_back(solve(problem, PolarGrid{n, n}));
  }
  const bool exact = problem.rhs.exact(Complex{}).has_value();
  const int count = exact ? levels : levels - 1;
  for (int k = 0; k < count; ++k) {
    ConvergenceLevel lv;
    lv.n = sols[k].grid().n_r;
    if (exact) {
      lv.error = max_error_vs_exact(sols[k], problem.rhs);
    } else {
      const PolarGrid& g = sols[k].grid();
      for (int i = 0; i < g.n_r; ++i)
        for (int j = 0; j < g.n_theta; ++j)
          lv.error = std::max(lv.error, std::abs(sols[k].v.at(i, j) - interpolate(sols[k + 1].v, g.node(i, j))));
    }
    if (k > 0 && lv.error > 0.0 && out.back().error > 0.0) lv.order = std::log2(out.back().error / lv.error);
    out.push_back(lv);
  }
  return out;
}

}  // namespace confw
