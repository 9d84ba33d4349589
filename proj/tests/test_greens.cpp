#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "epibvp/greens.hpp"

using namespace epibvp;

namespace {

constexpr ProblemKind P1 = ProblemKind::P1_Dirichlet;
constexpr ProblemKind P2 = ProblemKind::P2_NeumannAtHalf;
constexpr ProblemKind P3 = ProblemKind::P3_Robin;

std::vector<double> sample_ks(ProblemKind p) {
  const double range = positive_k_limit(p);
  return {-50.0, -10.0, -1.0, 0.5 * range, 0.9 * range};
}

}  // namespace

TEST(KernelValue, P1VanishesAtRegularEndAndBoundary) {
  const GreensKernel g(P1, -1.0);
  for (double t : {0.0, 0.1, 0.37, 0.5}) EXPECT_EQ(kernel_value(g, 0.0, t), 0.0);
  for (double s : {0.0, 0.2, 0.5}) EXPECT_NEAR(kernel_value(g, s, 0.5), 0.0, 1e-16);
}

TEST(KernelValue, P2DiagonalMatchesDirectFormula) {
  const GreensKernel g(P2, -1.0);
  const double expected = -std::cosh(0.25) * std::sinh(0.25) / std::cosh(0.5);
  EXPECT_NEAR(kernel_value(g, 0.25, 0.25), expected, 1e-15);
}

TEST(KernelValue, RejectsArgumentsOutsideInterval) {
  const GreensKernel g(P1, -1.0);
  EXPECT_THROW(kernel_value(g, -0.1, 0.2), DomainError);
  EXPECT_THROW(kernel_value(g, 0.2, 0.6), DomainError);
}

TEST(KernelValue, SymmetricInArguments) {
  for (auto p : kAllProblems)
    for (double k : sample_ks(p)) {
      const GreensKernel g(p, k);
      for (double s : {0.05, 0.2, 0.45})
        for (double t : {0.1, 0.3, 0.5}) EXPECT_NEAR(g(s, t), g(t, s), 1e-14);
    }
}

TEST(Validity, Ranges) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_THROW(GreensKernel(P1, 0.0), OutOfValidity);
  EXPECT_NO_THROW(GreensKernel(P1, 4 * pi2 - 1e-6));
  EXPECT_THROW(GreensKernel(P1, 4 * pi2), OutOfValidity);
  EXPECT_NO_THROW(GreensKernel(P2, 9.0));
  EXPECT_THROW(GreensKernel(P2, pi2), OutOfValidity);
  EXPECT_NO_THROW(GreensKernel(P3, pi2 / 4));
  EXPECT_THROW(GreensKernel(P3, 2.5), OutOfValidity);
  EXPECT_THROW(GreensKernel(P3, 3.0), OutOfValidity);
  EXPECT_NO_THROW(GreensKernel(P3, -1.0));
  EXPECT_NEAR(std::cosh(0.5) - std::sinh(0.5), 0.6065306597, 1e-9);
}

TEST(ApplyKernel, ZeroInZeroOut) {
  const GreensKernel g(P2, -1.0);
  const std::vector<double> h(129, 0.0);
  for (double v : apply_kernel(g, h)) EXPECT_EQ(v, 0.0);
}

TEST(ApplyKernel, ConstantSourceMatchesClosedForm) {
  // u'' - u = 1, u(0) = 0, u(1/2) = 0
  const GreensKernel g(P1, -1.0);
  const KernelOperator op(g, 2048);
  const std::vector<double> h(op.nodes().size(), 1.0);
  const auto u = op.apply(h);
  const double B = (1.0 - std::cosh(0.5)) / std::sinh(0.5);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = op.nodes()[i];
    EXPECT_NEAR(u[i], -1.0 + std::cosh(t) + B * std::sinh(t), 1e-8) << "t=" << t;
  }
}

TEST(ApplyKernel, SmoothSourceAllProblems) {
  struct Case {
    ProblemKind p;
    double k;
  };
  for (const Case cs : {Case{P1, -4.0}, Case{P2, 5.0}, Case{P3, -2.0}, Case{P3, 2.0}}) {
    // u(t) = t (a - t)^2; u'(1/2) = (a - 1/2)(a - 3/2)
    double a = 0.5;
    if (cs.p == P2) a = 1.5;
    if (cs.p == P3) a = 2.5;  // (1/2)(a - 1/2)^2 = (a - 1/2)(a - 3/2)
    const auto u_exact = [&](double t) { return t * (a - t) * (a - t); };
    const auto u_dd = [&](double t) { return -4.0 * (a - t) + 2.0 * t; };
    const GreensKernel g(cs.p, cs.k);
    const KernelOperator op(g, 1024);
    std::vector<double> h;
    for (double t : op.nodes()) h.push_back(u_dd(t) + cs.k * u_exact(t));
    const auto u = op.apply(h);
    for (std::size_t i = 0; i < u.size(); i += 64) EXPECT_NEAR(u[i], u_exact(op.nodes()[i]), 1e-9) << tag(cs.p);
  }
}

TEST(ApplyKernel, NonNegativeSourceGivesNonPositiveSolution) {
  for (auto p : kAllProblems)
    for (double k : sample_ks(p)) {
      const GreensKernel g(p, k);
      const KernelOperator op(g, 256);
      std::vector<double> h;
      for (double t : op.nodes()) h.push_back(1.0 + std::sin(20.0 * t) * std::sin(20.0 * t));
      for (double v : op.apply(h)) EXPECT_LE(v, 0.0) << tag(p) << " k=" << k;
    }
}

TEST(SignCheck, Examples) {
  EXPECT_TRUE(sign_check(GreensKernel(P1, -4.0), 200).pass);
  EXPECT_TRUE(sign_check(GreensKernel(P2, 9.0), 200).pass);
  EXPECT_THROW(GreensKernel(P3, 2.5), OutOfValidity);
  EXPECT_THROW(sign_check(GreensKernel(P1, -1.0), 1), ConfigError);
}

// ---- properties -----------------------------------------------------------

TEST(GreensProperty, SolvesHomogeneousEquationOffDiagonal) {
  const double h = 1e-3;
  for (auto p : kAllProblems)
    for (double k : sample_ks(p)) {
      const GreensKernel g(p, k);
      for (double s0 : {0.1, 0.25, 0.4})
        for (double t : {0.03, 0.07, 0.2, 0.3, 0.45, 0.49}) {
          if (std::abs(t - s0) < 3 * h) continue;
          // fourth-order five-point second difference
          const double gpp = (-g(s0, t - 2 * h) + 16 * g(s0, t - h) - 30 * g(s0, t) + 16 * g(s0, t + h) -
                              g(s0, t + 2 * h)) /
                             (12 * h * h);
          EXPECT_NEAR(gpp + k * g(s0, t), 0.0, 1e-6) << tag(p) << " k=" << k << " s0=" << s0 << " t=" << t;
        }
    }
}

TEST(GreensProperty, DerivativeJumpsByOne) {
  const double h = 1e-6;
  for (auto p : kAllProblems)
    for (double k : sample_ks(p)) {
      const GreensKernel g(p, k);
      for (double s0 : {0.1, 0.25, 0.4}) {
        const double right = (g(s0, s0 + h) - g(s0, s0)) / h;
        const double left = (g(s0, s0) - g(s0, s0 - h)) / h;
        EXPECT_NEAR(right - left, 1.0, 1e-4) << tag(p) << " k=" << k;
      }
    }
}

TEST(GreensProperty, BoundaryConditionsAtHalf) {
  const double h = 1e-4;
  for (auto p : kAllProblems)
    for (double k : sample_ks(p)) {
      const GreensKernel g(p, k);
      for (double s0 : {0.1, 0.3}) {
        const double G = g(s0, 0.5);
        const double dG = (3 * g(s0, 0.5) - 4 * g(s0, 0.5 - h) + g(s0, 0.5 - 2 * h)) / (2 * h);
        EXPECT_NEAR(g(s0, 0.0), 0.0, 1e-15);
        switch (p) {
          case P1: EXPECT_NEAR(G, 0.0, 1e-6); break;
          case P2: EXPECT_NEAR(dG, 0.0, 1e-6) << "k=" << k; break;
          case P3: EXPECT_NEAR(G - dG, 0.0, 1e-6) << "k=" << k; break;
        }
      }
    }
}

TEST(GreensProperty, NonPositiveOverValidityRange) {
  for (auto p : kAllProblems)
    for (double k : sample_ks(p)) {
      const auto rep = sign_check(GreensKernel(p, k), 200);
      EXPECT_TRUE(rep.pass) << tag(p) << " k=" << k << " max=" << rep.max_value;
      EXPECT_EQ(rep.resolution, 200);
    }
}
