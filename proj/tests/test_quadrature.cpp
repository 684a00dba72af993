#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "confw/quadrature.hpp"
#include "confw/reference.hpp"

using namespace confw;

namespace {

constexpr double kPi = std::numbers::pi;
// int_D |1-w|^3 / |1+w| dmu, by adaptive multiprecision quadrature (mpmath)
constexpr double kKoebeS3 = 14.743690347594971;

}  // namespace

TEST(IntegrateDisc, Area) {
  const QuadResult q = integrate_disc([](Complex) { return 1.0; });
  EXPECT_EQ(q.verdict, Verdict::Converged);
  EXPECT_NEAR(q.value / kPi, 1.0, 1e-6);
}

TEST(IntegrateDisc, SecondMoment) {
  const QuadResult q = integrate_disc([](Complex w) { return std::norm(w); });
  EXPECT_EQ(q.verdict, Verdict::Converged);
  EXPECT_NEAR(q.value / (kPi / 2), 1.0, 1e-6);
}

TEST(IntegrateDisc, LogDivergence) {
  const QuadResult q = integrate_disc([](Complex w) { return 1.0 / (1.0 - std::abs(w)); });
  EXPECT_EQ(q.verdict, Verdict::Divergent);
  EXPECT_TRUE(std::isinf(q.error_estimate));
}

TEST(IntegrateDisc, NonFiniteIntegrand) {
  try {
    integrate_disc([](Complex w) { return w.real() > 0.5 ? std::nan("") : 1.0; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IntegrandNotFinite);
  }
}

TEST(IntegrateDisc, GridValidation) {
  EXPECT_THROW(integrate_disc([](Complex) { return 1.0; }, {12, 16, 3.0}), Error);
  EXPECT_THROW(integrate_disc([](Complex) { return 1.0; }, {16, 4, 3.0}), Error);
  EXPECT_THROW(integrate_disc([](Complex) { return 1.0; }, {16, 16, 0.5}), Error);
  EXPECT_THROW(integrate_disc([](Complex) { return 1.0; }, {}, 0), Error);
}

TEST(IntegrateDisc, SingleLevelIsInconclusive) {
  const QuadResult q = integrate_disc([](Complex) { return 1.0; }, {}, 1);
  EXPECT_EQ(q.verdict, Verdict::Inconclusive);
  EXPECT_EQ(q.levels_used, 1);
}

TEST(PairwiseSum, FixedOrder) {
  std::vector<double> v(1000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / (k + 1.0);
  EXPECT_EQ(pairwise_sum(v), pairwise_sum(v));
  EXPECT_NEAR(pairwise_sum(v), 7.485470860550345, 1e-13);
}

TEST(Classify, GeometricTailIsExtrapolated) {
  QuadResult q;
  double v = 0.0, d = 1.0;
  for (int k = 0; k < 8; ++k) {
    q.level_values.push_back(v);
    v += d;
    d *= 0.5;
  }
  detail::classify(q, 1e-12);
  EXPECT_EQ(q.verdict, Verdict::Converged);
  EXPECT_TRUE(q.extrapolated);
  EXPECT_NEAR(q.value, 2.0, 1e-12);
}

TEST(Classify, SlowLinearGrowthIsDivergent) {
  QuadResult q;
  for (int k = 0; k < 8; ++k) q.level_values.push_back(k * 0.1);
  detail::classify(q, 1e-6);
  EXPECT_EQ(q.verdict, Verdict::Divergent);
}

TEST(Classify, ErraticIsInconclusive) {
  QuadResult q;
  q.level_values = {1.0, 2.0, 1.5, 1.9, 1.6, 1.62, 1.8};
  detail::classify(q, 1e-9);
  EXPECT_EQ(q.verdict, Verdict::Inconclusive);
}

TEST(Brennan, SEqualTwoIsPiForAllFamilies) {
  for (auto f : kAllFamilies) {
    const QuadResult q = brennan_direct(ConformalMap(f), 2.0);
    EXPECT_EQ(q.verdict, Verdict::Converged) << family_name(f);
    EXPECT_NEAR(q.value / kPi, 1.0, 1e-4) << family_name(f);
  }
}

TEST(Brennan, KoebeRange) {
  const ConformalMap koebe(DomainFamily::SlitPlane);
  for (double s : {1.3, 1.5, 2.0, 3.0, 3.9, 4.1}) {
    const QuadResult q = brennan_direct(koebe, s);
    EXPECT_EQ(q.verdict, reference::koebe_brennan_finite(s) ? Verdict::Converged : Verdict::Divergent) << s;
  }
}

TEST(Brennan, KoebeValueAgainstOracle) {
  const QuadResult q = brennan_direct(ConformalMap(DomainFamily::SlitPlane), 3.0);
  EXPECT_EQ(q.verdict, Verdict::Converged);
  EXPECT_NEAR(q.value / kKoebeS3, 1.0, 1e-4);
  EXPECT_LT(q.error_estimate, 1e-3 * q.value);
}

TEST(Brennan, ClosedFormRange) {
  EXPECT_FALSE(reference::koebe_brennan_finite(4.0 / 3.0));
  EXPECT_TRUE(reference::koebe_brennan_finite(1.34));
  EXPECT_TRUE(reference::koebe_brennan_finite(3.99));
  EXPECT_FALSE(reference::koebe_brennan_finite(4.0));
}

TEST(Brennan, DeterministicLevels) {
  const ConformalMap koebe(DomainFamily::SlitPlane);
  EXPECT_EQ(brennan_direct(koebe, 3.5, {}, 5).level_values, brennan_direct(koebe, 3.5, {}, 5).level_values);
}

TEST(Brennan, RequiresToDisc) {
  EXPECT_THROW(brennan_direct(ConformalMap(DomainFamily::Strip).inverse(), 2.0), Error);
}

TEST(InverseBrennan, DocumentedValues) {
  const ConformalMap koebe(DomainFamily::SlitPlane);
  const QuadResult zero = inverse_brennan(koebe, 0.0);
  EXPECT_EQ(zero.verdict, Verdict::Converged);
  EXPECT_NEAR(zero.value / kPi, 1.0, 1e-6);
  EXPECT_EQ(inverse_brennan(koebe, -1.9).verdict, Verdict::Converged);
  EXPECT_EQ(inverse_brennan(koebe, 0.7).verdict, Verdict::Divergent);
}

TEST(Kpq, Exponent) {
  EXPECT_DOUBLE_EQ(kpq_exponent(2.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(kpq_exponent(4.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(kpq_exponent(3.0, 1.5), 1.0);
  for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{2.0, 3.0}, std::pair{2.0, 0.5}}) {
    try {
      kpq_exponent(p, q);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidExponents);
    }
  }
}

TEST(Kpq, CardioidArea) {
  const QuadResult k = kpq_norm(ConformalMap(DomainFamily::Cardioid), 2.0, 1.0);
  EXPECT_EQ(k.verdict, Verdict::Converged);
  EXPECT_NEAR(k.value / std::sqrt(3.0 * kPi / 8.0), 1.0, 1e-4);
  EXPECT_NEAR(k.value, 1.0854, 1e-4);
}

TEST(Kpq, ExteriorHasInfiniteArea) {
  const QuadResult k = kpq_norm(ConformalMap(DomainFamily::ExteriorOfDisc), 2.0, 1.0);
  EXPECT_EQ(k.verdict, Verdict::Divergent);
  EXPECT_TRUE(std::isinf(k.value));
}

TEST(Kpq, StripAreaIsInfinite) {
  EXPECT_EQ(kpq_norm(ConformalMap(DomainFamily::Strip), 2.0, 1.0).verdict, Verdict::Divergent);
}

TEST(VerdictNames, Strings) {
  EXPECT_EQ(to_string(Verdict::Converged), "converged");
  EXPECT_EQ(to_string(Verdict::Divergent), "divergent");
  EXPECT_EQ(to_string(Verdict::Inconclusive), "inconclusive");
}
