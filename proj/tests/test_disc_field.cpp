#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "confw/disc_field.hpp"

using namespace confw;

namespace {

constexpr double kPi = std::numbers::pi;

// int_Omega |grad(b o phi)|^2 dA on a Cartesian midpoint grid over `box`,
// entirely on the Omega side: no pullback and no polar grid.
double cartesian_energy(const ConformalMap& phi, const TestBump& b, double x0, double x1, double y0, double y1,
                        int n) {
  const double dx = (x1 - x0) / n, dy = (y1 - y0) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z(x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy);
      if (!phi.accepts(z)) continue;
      const Complex g = b.gradient(phi.apply(z));
      if (g == Complex{}) continue;
      sum += std::norm(g) * std::norm(phi.apply_derivative(z)) * dx * dy;
    }
  return sum;
}

}  // namespace

TEST(PolarGrid, Layout) {
  const PolarGrid g{16, 32};
  EXPECT_DOUBLE_EQ(g.r(0), 1.0 / 32);
  EXPECT_DOUBLE_EQ(g.theta(0), 0.0);
  EXPECT_EQ(g.size(), 512u);
  double area = 0.0;
  for (int i = 0; i < g.n_r; ++i) area += cell_area(g, i) * g.n_theta;
  EXPECT_NEAR(area, kPi, 1e-13);
  EXPECT_THROW((PolarGrid{0, 16}.validate()), Error);
}

TEST(DiscField, RejectsNonFiniteAndWrongSize) {
  const PolarGrid g{16, 16};
  EXPECT_THROW(DiscField(g, std::vector<double>(10, 0.0)), Error);
  std::vector<double> v(g.size(), 0.0);
  v[3] = INFINITY;
  EXPECT_THROW(DiscField(g, v), Error);
}

TEST(Gradient, LinearFunction) {
  const PolarGrid g{128, 128};
  const VectorField grad = gradient(DiscField::sample(g, [](Complex w) { return w.real(); }));
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) worst = std::max({worst, std::abs(grad.x[k] - 1.0), std::abs(grad.y[k])});
  EXPECT_LE(worst, 1e-3);
}

TEST(Gradient, Constant) {
  const PolarGrid g{32, 32};
  const VectorField grad = gradient(DiscField::sample(g, [](Complex) { return 3.5; }));
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(grad.x[k], 0.0);
    EXPECT_EQ(grad.y[k], 0.0);
  }
}

TEST(Gradient, QuadraticIsSecondOrder) {
  auto err = [](int n) {
    const PolarGrid g{n, n};
    const VectorField grad = gradient(DiscField::sample(g, [](Complex w) { return std::norm(w) + w.real() * w.imag(); }));
    double worst = 0.0;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_theta; ++j) {
        const Complex w = g.node(i, j);
        const auto k = g.index(i, j);
        worst = std::max({worst, std::abs(grad.x[k] - (2 * w.real() + w.imag())),
                          std::abs(grad.y[k] - (2 * w.imag() + w.real()))});
      }
    return worst;
  };
  const double e1 = err(32), e2 = err(64);
  EXPECT_LT(e2, 1e-2);
  EXPECT_GT(std::log2(e1 / e2), 1.8);
}

TEST(Gradient, TooCoarse) {
  try {
    gradient(DiscField::sample(PolarGrid{8, 16}, [](Complex) { return 0.0; }));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
  }
}

TEST(LpNorm, DocumentedValues) {
  const PolarGrid g{256, 256};
  EXPECT_NEAR(lp_norm(DiscField::sample(g, [](Complex) { return 1.0; }), 2.0), std::sqrt(kPi), 1e-12);
  EXPECT_NEAR(lp_norm(DiscField::sample(g, [](Complex w) { return w.real(); }), 2.0), std::sqrt(kPi / 4), 1e-5);
  const DiscField one = DiscField::sample(g, [](Complex) { return 1.0; });
  const DiscField density = disc_weight_field(ConformalMap(DomainFamily::UpperHalfPlane), g);
  EXPECT_NEAR(lp_norm(one, 1.0, density), kPi, 1e-12);
  EXPECT_THROW(lp_norm(one, 0.5), Error);
  EXPECT_THROW(lp_norm(one, 1.0, DiscField::sample(PolarGrid{16, 16}, [](Complex) { return 1.0; })), Error);
}

TEST(LpNorm, Homogeneity) {
  const PolarGrid g{64, 64};
  const DiscField f = DiscField::sample(g, [](Complex w) { return std::sin(3 * w.real()) + w.imag(); });
  for (double p : {1.0, 2.0, 4.5})
    for (double k : {-2.0, 0.25, 10.0}) EXPECT_NEAR(lp_norm(f.scaled(k), p), std::abs(k) * lp_norm(f, p), 1e-13);
}

TEST(WeightDensity, IsOneForEveryFamily) {
  const PolarGrid g{32, 32};
  for (auto f : kAllFamilies)
    for (double v : disc_weight_field(ConformalMap(f), g).values()) EXPECT_NEAR(v, 1.0, 1e-12) << family_name(f);
}

TEST(TestBump, ValueAndGradient) {
  const TestBump b({0.2, -0.1}, 0.3, 1.5);
  EXPECT_DOUBLE_EQ(b.value({0.2, -0.1}), 1.5);
  EXPECT_EQ(b.value({0.6, 0.0}), 0.0);
  const Complex w(0.3, 0.0);
  const double eps = 1e-6;
  const Complex fd((b.value(w + eps) - b.value(w - eps)) / (2 * eps),
                   (b.value(w + Complex(0, eps)) - b.value(w - Complex(0, eps))) / (2 * eps));
  EXPECT_LT(std::abs(fd - b.gradient(w)), 1e-8);
  try {
    TestBump({0.8, 0.0}, 0.3, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidBump);
  }
}

TEST(TestBump, SeededFamily) {
  const auto a = random_bumps(30, 7), b = random_bumps(30, 7), c = random_bumps(30, 8);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].center(), b[k].center());
    EXPECT_LT(std::abs(a[k].center()) + a[k].radius(), 1.0);
  }
  EXPECT_NE(a[0].center(), c[0].center());
}

TEST(Energy, IsometryAllFamilies) {
  const auto bumps = random_bumps(5);
  for (auto f : kAllFamilies) EXPECT_LE(isometry_check(ConformalMap(f), bumps), 1e-6) << family_name(f);
  EXPECT_LE(isometry_check(ConformalMap(DomainFamily::DiscIdentity), bumps), 1e-12);
}

TEST(Energy, ZeroBumpAndRealPart) {
  const TestBump zero({0.1, 0.1}, 0.2, 0.0);
  EXPECT_EQ(pullback_energy(ConformalMap(DomainFamily::Strip), zero, 2.0), 0.0);
  // Re w has unit gradient; its Dirichlet energy over the disc is pi
  const double e = pullback_energy(ConformalMap(DomainFamily::UpperHalfPlane), RealPart{}, 2.0, {256, 256, 1.0});
  EXPECT_NEAR(e / kPi, 1.0, 1e-6);
  EXPECT_THROW(pullback_energy(ConformalMap(DomainFamily::Strip), zero, 0.5), Error);
}

TEST(Energy, CartesianOracleCardioid) {
  const ConformalMap phi(DomainFamily::Cardioid);
  const TestBump b({0.1, 0.2}, 0.35, 1.2);
  const double oracle = cartesian_energy(phi, b, -0.15, 1.05, -0.7, 0.7, 2400);
  EXPECT_NEAR(pullback_energy(phi, b, 2.0) / oracle, 1.0, 2e-3);
}

TEST(Energy, CartesianOracleHalfPlane) {
  const ConformalMap phi(DomainFamily::UpperHalfPlane);
  const TestBump b({-0.2, 0.1}, 0.3, 0.8);
  // support image: psi of the support disc, inside this box
  const ConformalMap psi = phi.inverse();
  double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
  for (int k = 0; k < 720; ++k) {
    const Complex z = psi.apply(b.center() + std::polar(b.radius(), 2 * kPi * k / 720));
    x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag()), y1 = std::max(y1, z.imag());
  }
  const double pad = 0.05 * (x1 - x0);
  const double oracle = cartesian_energy(phi, b, x0 - pad, x1 + pad, y0 - pad, y1 + pad, 2400);
  EXPECT_NEAR(pullback_energy(phi, b, 2.0) / oracle, 1.0, 2e-3);
}

TEST(Composition, CardioidTwentyBumps) {
  const auto rep = composition_inequality_check(ConformalMap(DomainFamily::Cardioid), 2.0, 1.5, random_bumps(20));
  ASSERT_EQ(rep.size(), 20u);
  for (const auto& c : rep) EXPECT_TRUE(c.passed) << c.lhs << " " << c.rhs;
}

TEST(Composition, ZeroAmplitudePasses) {
  const std::vector<TestBump> zero{TestBump({0.0, 0.0}, 0.5, 0.0)};
  const auto rep = composition_inequality_check(ConformalMap(DomainFamily::Cardioid), 2.0, 1.5, zero);
  EXPECT_EQ(rep[0].lhs, 0.0);
  EXPECT_TRUE(rep[0].passed);
}

TEST(Composition, DivergentConstant) {
  try {
    composition_inequality_check(ConformalMap(DomainFamily::ExteriorOfDisc), 2.0, 1.0, random_bumps(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KpqDivergent);
  }
}

TEST(Csv, HeaderAndPrecision) {
  const DiscField f = DiscField::sample(PolarGrid{16, 16}, [](Complex w) { return 1.0 / 3.0 + w.real(); });
  std::ostringstream os;
  f.write_csv(os, "v");
  std::string line;
  std::istringstream in(os.str());
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,v");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 256);
}
