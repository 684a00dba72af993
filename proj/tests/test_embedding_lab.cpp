#include <gtest/gtest.h>

#include <cmath>

#include "confw/embedding_lab.hpp"
#include "confw/reference.hpp"

using namespace confw;

namespace {

// first zero of J0 to 16 digits (tabulated)
constexpr double kJ01 = 2.404825557695773;

}  // namespace

TEST(Bessel, BisectionMatchesTable) {
  EXPECT_NEAR(reference::bessel_j0_first_zero(), kJ01, 1e-14);
  EXPECT_NEAR(reference::bessel_j0_series(0.0), 1.0, 0.0);
  EXPECT_NEAR(reference::bessel_j0_series(1.0), 0.7651976865579666, 1e-15);
}

TEST(QFromPs, DocumentedValues) {
  EXPECT_DOUBLE_EQ(q_from_ps(3.0, 3.0), 2.25);
  EXPECT_DOUBLE_EQ(q_from_ps(4.0, 2.0), 2.0);
  EXPECT_NEAR(q_from_ps(4.0, 4.0 - 1e-12), 8.0 / 3.0, 1e-11);
  for (double p : {2.1, 3.0, 7.5, 1e3}) EXPECT_DOUBLE_EQ(q_from_ps(p, 2.0), 2.0);
  EXPECT_THROW(q_from_ps(2.0, 3.0), Error);
  EXPECT_THROW(q_from_ps(3.0, 1.0), Error);
  EXPECT_THROW(q_from_ps(3.0, 4.0), Error);
}

TEST(ExponentBounds, ConjecturedEndpoint) {
  const auto b = exponent_bounds(1.5, kConjecturedAlpha0);
  EXPECT_TRUE(b.conjectural);
  EXPECT_DOUBLE_EQ(b.q_max, 1.2);
  EXPECT_DOUBLE_EQ(b.q_max, b.q_ceiling);
  EXPECT_DOUBLE_EQ(b.p_min, 4.0 / 3.0);
}

TEST(ExponentBounds, BestKnownThreshold) {
  const auto b = exponent_bounds(1.9, kDefaultAlpha0);
  EXPECT_FALSE(b.conjectural);
  EXPECT_NEAR(b.q_max, 1.7975, 1e-4);
  EXPECT_NEAR(b.r_max, 17.744, 1e-3);
  EXPECT_NEAR(b.p_min, 1.3634, 1e-4);
  EXPECT_LT(b.q_max, b.q_ceiling);
  EXPECT_LT(b.r_max, b.r_ceiling);
}

TEST(ExponentBounds, ChainOnGrid) {
  for (int i = 0; i < 20; ++i) {
    const double a0 = -2.0 + 1.9 * (i + 0.5) / 20.0;
    for (int j = 0; j < 20; ++j) {
      const double p = p_min(a0) + (2.0 - p_min(a0)) * (j + 0.5) / 20.0;
      const auto b = exponent_bounds(p, a0);
      EXPECT_LE(1.0, b.q_max);
      EXPECT_LT(b.q_max, b.q_ceiling);
      EXPECT_LT(b.q_ceiling, p);
      EXPECT_LT(b.r_max, b.r_ceiling);
    }
  }
}

TEST(ExponentBounds, OutOfRange) {
  auto code = [](double p, double a0) {
    try {
      exponent_bounds(p, a0);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code(p_min(kDefaultAlpha0), kDefaultAlpha0), ErrorCode::ExponentOutOfRange);
  EXPECT_EQ(code(1.2, kDefaultAlpha0), ErrorCode::ExponentOutOfRange);
  EXPECT_EQ(code(2.0, kDefaultAlpha0), ErrorCode::ExponentOutOfRange);
  EXPECT_EQ(code(1.5, -2.5), ErrorCode::ExponentOutOfRange);
  EXPECT_EQ(code(1.5, 0.0), ErrorCode::ExponentOutOfRange);
}

TEST(ExponentBudget, AlphaMustMatchS) {
  ExponentBudget b;
  b.s = 3.0;
  b.alpha = -1.0;
  EXPECT_NO_THROW(b.validate());
  b.alpha = -0.5;
  EXPECT_THROW(b.validate(), Error);
}

TEST(Poincare, DiscConstantNearBesselOracle) {
  const auto est = poincare_constant_disc(2.0, PolarGrid{256, 256});
  EXPECT_EQ(est.method, ConstantMethod::EigenRayleigh);
  EXPECT_FALSE(est.lower_bound_only);
  EXPECT_NEAR(est.value * kJ01, 1.0, 1e-2);
  EXPECT_NEAR(est.value * kJ01, 1.0, 1e-4);
}

TEST(Poincare, EigenvalueErrorShrinksAtSecondOrder) {
  std::vector<double> err;
  for (int n : {32, 64, 128, 256}) err.push_back(std::abs(dirichlet_eigen_estimate(PolarGrid{n, n}).eigenvalue - kJ01 * kJ01));
  for (std::size_t k = 1; k < err.size(); ++k) {
    EXPECT_LT(err[k], err[k - 1]);
    EXPECT_GE(std::log2(err[k - 1] / err[k]), 1.9);
  }
}

TEST(Poincare, IterationCap) {
  try {
    dirichlet_eigen_estimate(PolarGrid{32, 32}, 1e-30, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IterationDivergence);
  }
}

TEST(Poincare, BumpFamilyLowerBoundGrows) {
  const PolarGrid g{128, 128};
  double prev = 0.0;
  for (std::size_t size : {4u, 16u, 64u}) {
    const auto est = poincare_constant_disc(1.0, g, size);
    EXPECT_TRUE(est.lower_bound_only);
    EXPECT_EQ(est.method, ConstantMethod::BumpFamilyMax);
    EXPECT_GT(est.value, 0.0);
    EXPECT_GE(est.value, prev);
    prev = est.value;
  }
  EXPECT_THROW(poincare_constant_disc(0.5, g), Error);
}

TEST(WeightedTransfer, HalfPlaneAndIdentity) {
  const auto bumps = random_bumps(5);
  EXPECT_LE(weighted_constant_check(ConformalMap(DomainFamily::UpperHalfPlane), 3.0, bumps).max_mismatch, 1e-6);
  EXPECT_LE(weighted_constant_check(ConformalMap(DomainFamily::DiscIdentity), 3.0, bumps).max_mismatch, 1e-12);
}

TEST(WeightedTransfer, AllFamiliesAndSharpConstant) {
  const auto bumps = random_bumps(5);
  const double k2 = 1.0 / kJ01;
  for (auto f : kAllFamilies) {
    const auto r = weighted_constant_check(ConformalMap(f), 2.0, bumps);
    EXPECT_LE(r.max_mismatch, 1e-6) << family_name(f);
    EXPECT_LE(r.max_ratio, k2) << family_name(f);
    EXPECT_GT(r.max_ratio, 0.0);
  }
}

TEST(WeightedTransfer, InvalidInputs) {
  EXPECT_THROW(weighted_constant_check(ConformalMap(DomainFamily::Strip), 0.5, random_bumps(1)), Error);
  EXPECT_THROW(weighted_constant_check(ConformalMap(DomainFamily::Strip).inverse(), 2.0, random_bumps(1)), Error);
}

TEST(ConstantMethodNames, Strings) {
  EXPECT_EQ(to_string(ConstantMethod::EigenRayleigh), "eigen-rayleigh");
  EXPECT_EQ(to_string(ConstantMethod::BumpFamilyMax), "bump-family-max");
}
