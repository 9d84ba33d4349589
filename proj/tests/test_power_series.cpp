#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "epibvp/power_series.hpp"

using epibvp::PowerSeries;

namespace {

PowerSeries t(double a = 1.0) { return PowerSeries::monomial(2, a); }
PowerSeries t2(double a = 1.0) { return PowerSeries::monomial(4, a); }
PowerSeries sqrt_t(double a = 1.0) { return PowerSeries::monomial(1, a); }

PowerSeries random_series(std::mt19937& rng, int max_k = 8) {
  std::uniform_int_distribution<int> nterms(1, 4), kdist(0, max_k);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<PowerSeries::Term> terms;
  for (int i = nterms(rng); i > 0; --i) terms.emplace_back(kdist(rng), coeff(rng));
  return PowerSeries::from_terms(terms);
}

void expect_coeffs_near(const PowerSeries& a, const PowerSeries& b, double tol) {
  const int top = std::max(a.max_k(), b.max_k());
  for (int k = 0; k <= top; ++k) EXPECT_NEAR(a.coeff(k), b.coeff(k), tol) << "k=" << k;
}

// int_0^x f by x = y^2 substitution (smooth in y) and fine Simpson.
double reference_integral(const PowerSeries& f, double x) {
  const int m = 4000;
  const double Y = std::sqrt(x), h = Y / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double y = i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * f.eval(y * y) * 2.0 * y;
  }
  return s * h / 3.0;
}

}  // namespace

TEST(PowerSeriesAdd, AdditiveInverseIsZero) { EXPECT_TRUE((t() + (-t())).is_zero()); }

TEST(PowerSeriesAdd, LikeTermsMerge) { EXPECT_EQ(t(2.0) + t2() + t(), t(3.0) + t2()); }

TEST(PowerSeriesAdd, DisjointExponentsKept) {
  const auto s = sqrt_t() + t();
  ASSERT_EQ(s.terms().size(), 2u);
  EXPECT_EQ(s.coeff(1), 1.0);
  EXPECT_EQ(s.coeff(2), 1.0);
}

TEST(PowerSeriesMul, TTimesT) { EXPECT_EQ(t() * t(), t2()); }

TEST(PowerSeriesMul, SquareOfSeedFactorMatchesBinomial) {
  // (A - sqrt(2t))^2 with A = 1: 1 - 2 sqrt(2) t^(1/2) + 2 t
  const auto f = PowerSeries::constant(1.0) - sqrt_t(std::sqrt(2.0));
  const auto sq = f * f;
  EXPECT_NEAR(sq.coeff(0), 1.0, 1e-15);
  EXPECT_NEAR(sq.coeff(1), -2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(sq.coeff(2), 2.0, 1e-15);
  EXPECT_EQ(sq.max_k(), 2);
  for (double x : {0.0, 0.05, 0.2, 0.5}) {
    const double direct = (1.0 - std::sqrt(2.0 * x)) * (1.0 - std::sqrt(2.0 * x));
    EXPECT_NEAR(sq.eval(x), direct, 1e-14);
  }
}

TEST(PowerSeriesMul, ZeroAnnihilates) {
  EXPECT_TRUE((t2() * PowerSeries{}).is_zero());
  EXPECT_TRUE((PowerSeries{} * sqrt_t()).is_zero());
}

TEST(PowerSeriesDivT2, ExamplesAndPrecondition) {
  EXPECT_EQ(t2().scale_div_t2(), PowerSeries::constant(1.0));
  EXPECT_EQ((t2() + PowerSeries::monomial(6, 1.0)).scale_div_t2(), PowerSeries::constant(1.0) + t());
  EXPECT_THROW(t().scale_div_t2(), epibvp::NegativeExponent);
}

TEST(PowerSeriesIntegrate, PowerRule) {
  EXPECT_EQ(PowerSeries::constant(1.0).integrate(), t());
  const auto s = sqrt_t().integrate();
  EXPECT_NEAR(s.coeff(3), 2.0 / 3.0, 1e-16);
  EXPECT_EQ(s.terms().size(), 1u);
  EXPECT_EQ(t2(3.0).integrate(), PowerSeries::monomial(6, 1.0));
}

TEST(PowerSeriesEval, Examples) {
  const auto a = t() * (PowerSeries::constant(0.5) - t());
  EXPECT_EQ(a.eval(0.5), 0.0);
  const auto beta = -(t() * (PowerSeries::constant(1.0) - sqrt_t(std::sqrt(2.0))));
  EXPECT_NEAR(beta.eval(0.5), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(t2().eval(0.25), 0.0625);
  EXPECT_THROW(t().eval(-1e-3), epibvp::DomainError);
}

TEST(PowerSeriesConstruct, NegativeExponentRejected) {
  EXPECT_THROW(PowerSeries::monomial(-1, 1.0), epibvp::NegativeExponent);
  EXPECT_THROW(PowerSeries::from_terms({{2, 1.0}, {-2, 1.0}}), epibvp::NegativeExponent);
}

TEST(PowerSeriesConstruct, NormalizationDropsZerosAndTinyCoefficients) {
  const auto s = PowerSeries::from_terms({{0, 0.0}, {3, 1e-310}, {5, 2.0}, {7, 0.0}});
  ASSERT_EQ(s.terms().size(), 1u);
  EXPECT_EQ(s.min_k(), 5);
  EXPECT_EQ(s.max_k(), 5);
}

TEST(PowerSeriesDerivative, TermWise) {
  const auto s = PowerSeries::from_terms({{0, 4.0}, {2, 3.0}, {3, 2.0}, {4, 1.0}});
  const auto d = s.derivative();
  EXPECT_DOUBLE_EQ(d.coeff(0), 3.0);
  EXPECT_DOUBLE_EQ(d.coeff(1), 3.0);  // 2 * (3/2) t^(1/2)
  EXPECT_DOUBLE_EQ(d.coeff(2), 2.0);
  EXPECT_THROW(sqrt_t().derivative(), epibvp::NegativeExponent);
}

TEST(PowerSeriesProperty, AddMulCommutativeAssociative) {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_series(rng), b = random_series(rng), c = random_series(rng);
    expect_coeffs_near(a + b, b + a, 1e-12);
    expect_coeffs_near(a * b, b * a, 1e-12);
    expect_coeffs_near((a + b) + c, a + (b + c), 1e-12);
    expect_coeffs_near((a * b) * c, a * (b * c), 1e-12);
  }
}

TEST(PowerSeriesProperty, IntegrateMatchesQuadrature) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_series(rng, 10);
    const auto A = a.integrate();
    for (double x : {0.1, 0.3, 0.5}) EXPECT_NEAR(A.eval(x), reference_integral(a, x), 1e-10) << "trial " << trial;
  }
}

TEST(PowerSeriesProperty, SquareOverT2StaysOnLattice) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_series(rng);
    a = a.mul_t();  // minimal exponent >= 1
    const auto q = (a * a).scale_div_t2();
    EXPECT_TRUE(q.is_zero() || q.min_k() >= 0);
    for (double x : {0.1, 0.4}) {
      const double v = a.eval(x);
      EXPECT_NEAR(q.eval(x), v * v / (x * x), 1e-9 * (1.0 + std::abs(q.eval(x))));
    }
  }
}
