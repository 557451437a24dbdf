#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ortholab/analysis.hpp"
#include "ortholab/orthopoly.hpp"
#include "ortholab/quadrature.hpp"

using namespace ortholab;

namespace {

long double binom(long double top, int k) {
  // Γ-free generalized binomial for integer k.
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r *= (top - k + i) / i;
  return r;
}

// Explicit sum P_n = Σ_s C(n+α, n-s) C(n+β, s) ((x-1)/2)^s ((x+1)/2)^{n-s}.
double jacobi_explicit(double a, double b, int n, double x) {
  long double s = 0.0L;
  for (int k = 0; k <= n; ++k) {
    s += binom(n + a, n - k) * binom(n + b, k) * std::pow((x - 1.0L) / 2.0L, k) *
         std::pow((x + 1.0L) / 2.0L, n - k);
  }
  return static_cast<double>(s);
}

// L_n^{(α)}(x) = Σ_k (-1)^k C(n+α, n-k) x^k / k!.
double laguerre_explicit(double a, int n, double x) {
  long double s = 0.0L, fact = 1.0L;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) fact *= k;
    s += ((k % 2) ? -1.0L : 1.0L) * binom(n + a, n - k) * std::pow(static_cast<long double>(x), k) / fact;
  }
  return static_cast<double>(s);
}

}  // namespace

TEST(Jacobi, ClosedForms) {
  const auto leg = FamilySpec::jacobi(0, 0);
  EXPECT_EQ(jacobi_eval(FamilySpec::jacobi(0.3, 0.7), 0, 0.2), 1.0);
  EXPECT_NEAR(jacobi_eval(leg, 2, 0.5), -0.125, 1e-15);
  EXPECT_NEAR(jacobi_eval(FamilySpec::jacobi(1, 0), 1, 0.0), 0.5, 1e-15);
  const Eigen::VectorXd v = jacobi_eval_all(leg, 2, 0.5);
  EXPECT_NEAR(v[0], 1.0, 0);
  EXPECT_NEAR(v[1], 0.5, 1e-15);
  EXPECT_NEAR(v[2], -0.125, 1e-15);
  const Eigen::VectorXd ones = jacobi_eval_all(leg, 3, 1.0);
  for (int n = 0; n <= 3; ++n) EXPECT_NEAR(ones[n], 1.0, 1e-15);
}

TEST(Jacobi, AgreesWithExplicitSum) {
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.0}, {1.5, 0.5}, {-0.5, -0.5}, {2.0, -0.3}}) {
    const auto f = FamilySpec::jacobi(a, b);
    for (double x : {-0.95, -0.3, 0.0, 0.41, 0.99}) {
      const Eigen::VectorXd all = jacobi_eval_all(f, 25, x);
      for (int n = 0; n <= 25; ++n) {
        const double ref = jacobi_explicit(a, b, n, x);
        EXPECT_NEAR(all[n], ref, 1e-11 * std::max(1.0, std::abs(ref))) << a << " " << b << " " << n << " " << x;
      }
    }
  }
}

TEST(Jacobi, BatchMatchesSingle) {
  const auto f = FamilySpec::jacobi(0.7, 0.2);
  const Eigen::VectorXd all = jacobi_eval_all(f, 60, 0.33);
  for (int n = 0; n <= 60; n += 5) EXPECT_NEAR(all[n], jacobi_eval(f, n, 0.33), 1e-13 * std::abs(all[n]) + 1e-300);
}

TEST(Jacobi, ReflectionSymmetry) {
  for (auto [a, b] : {std::pair{0.5, 0.0}, {1.5, 0.5}, {0.2, -0.4}}) {
    for (int n : {1, 4, 17, 80}) {
      for (double x : {0.1, 0.5, 0.87}) {
        const double lhs = jacobi_eval(FamilySpec::jacobi(a, b), n, -x);
        const double rhs = (n % 2 ? -1.0 : 1.0) * jacobi_eval(FamilySpec::jacobi(b, a), n, x);
        EXPECT_NEAR(lhs, rhs, 1e-11 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST(Jacobi, DomainErrors) {
  EXPECT_THROW(jacobi_eval(FamilySpec::jacobi(0, 0), 3, 1.01), std::domain_error);
  EXPECT_THROW(jacobi_eval(FamilySpec::jacobi(0, 0), -1, 0.2), std::out_of_range);
  EXPECT_THROW(FamilySpec::jacobi(-1.0, 0.0), std::domain_error);
  EXPECT_THROW(jacobi_h(FamilySpec::laguerre(0.0), 2), std::invalid_argument);
}

TEST(JacobiH, ClosedFormsAndQuadrature) {
  const auto leg = FamilySpec::jacobi(0, 0);
  EXPECT_NEAR(jacobi_h(leg, 0), 2.0, 1e-14);
  EXPECT_NEAR(jacobi_h(leg, 5), 2.0 / 11.0, 1e-14);
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.0}, {1.5, 0.5}}) {
    const auto f = FamilySpec::jacobi(a, b);
    const QuadratureRule rule = gauss_rule(JacobiMeasure{a, b}, 110);
    for (int n = 0; n <= 100; n += 9) {
      const double q = rule.sum([&](double x) {
        const double p = jacobi_eval(f, n, x);
        return p * p;
      });
      EXPECT_NEAR(q, jacobi_h(f, n), 1e-10 * jacobi_h(f, n)) << n;
    }
  }
}

TEST(JacobiH, NTimesHFlattens) {
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.0}, {1.5, 0.5}}) {
    const auto f = FamilySpec::jacobi(a, b);
    EXPECT_NEAR(2000 * jacobi_h(f, 2000) / (1000 * jacobi_h(f, 1000)), 1.0, 1e-2);
  }
}

TEST(Jacobi, OrthogonalityMatrix) {
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.0}, {1.5, 0.5}}) {
    const auto f = FamilySpec::jacobi(a, b);
    const QuadratureRule rule = gauss_rule(JacobiMeasure{a, b}, 51);
    Eigen::MatrixXd V(rule.nodes.size(), 51);
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) V.row(i) = jacobi_eval_all(f, 50, rule.nodes[i]).transpose();
    const Eigen::MatrixXd G = V.transpose() * rule.weights.asDiagonal() * V;
    for (int m = 0; m <= 50; ++m) {
      for (int n = 0; n < m; ++n) EXPECT_LE(std::abs(G(m, n)), 1e-10 * std::sqrt(G(m, m) * G(n, n)));
    }
  }
}

TEST(JacobiAsymptotic, LegendreAtHalfPi) {
  const auto leg = FamilySpec::jacobi(0, 0);
  for (int n : {10, 101, 1000}) {
    const double expect = std::sqrt(2.0 / std::numbers::pi) / std::sqrt(n) *
                          std::cos((n + 0.5) * std::numbers::pi / 2 - std::numbers::pi / 4);
    EXPECT_NEAR(jacobi_asymptotic(leg, n, std::numbers::pi / 2), expect, 1e-14);
  }
}

TEST(JacobiAsymptotic, ResidualDecaysLikeNToMinusThreeHalves) {
  const auto f = FamilySpec::jacobi(0.3, 0.1);
  std::vector<double> ns, env;
  for (int n : geometric_grid(100, 2000, 12)) {
    ns.push_back(n);
    env.push_back(jacobi_residual_envelope(f, n, 1.0));
  }
  const GrowthFit fit = fit_growth_exponent(ns, env);
  EXPECT_GT(fit.slope, -1.7);
  EXPECT_LT(fit.slope, -1.3);
}

TEST(JacobiAsymptotic, ReflectedParametersAgreeToRemainderOrder) {
  const double theta = 1.1;
  for (int n : {200, 800}) {
    const auto f = FamilySpec::jacobi(0.5, 0.1), g = FamilySpec::jacobi(0.1, 0.5);
    const double lhs = jacobi_asymptotic(f, n, theta);
    const double rhs = (n % 2 ? -1.0 : 1.0) * jacobi_asymptotic(g, n, std::numbers::pi - theta);
    EXPECT_LT(std::abs(lhs - rhs), 20.0 * std::pow(n, -1.5));
  }
}

TEST(JacobiAsymptotic, RejectsEndpoints) {
  EXPECT_THROW(jacobi_asymptotic(FamilySpec::jacobi(0, 0), 5, 0.0), std::domain_error);
  EXPECT_THROW(jacobi_asymptotic(FamilySpec::jacobi(0, 0), 5, std::numbers::pi), std::domain_error);
}

TEST(Laguerre, ClosedFormsAndExplicitSum) {
  EXPECT_EQ(laguerre_eval(0.4, 0, 3.0), 1.0);
  EXPECT_NEAR(laguerre_eval(0.0, 2, 1.0), -0.5, 1e-15);
  for (int n : {0, 1, 7, 30}) EXPECT_NEAR(laguerre_eval(0.0, n, 0.0), 1.0, 1e-13);
  for (double a : {0.0, 0.5, 2.0}) {
    for (double x : {0.1, 1.0, 3.5, 9.0}) {
      for (int n = 0; n <= 20; ++n) {
        const double ref = laguerre_explicit(a, n, x);
        EXPECT_NEAR(laguerre_eval(a, n, x), ref, 1e-10 * std::max(1.0, std::abs(ref)));
      }
    }
  }
  EXPECT_THROW(laguerre_eval(0.0, 3, -0.1), std::domain_error);
}

TEST(LaguerreH, Values) {
  EXPECT_NEAR(laguerre_h(0.0, 17), 1.0, 1e-13);
  EXPECT_NEAR(laguerre_h(1.0, 2), 3.0, 1e-13);
  EXPECT_NEAR(laguerre_h(0.5, 0), 0.8862269255, 1e-10);
  for (double a : {0.5, 2.0}) {
    const double ratio = (laguerre_h(a, 2000) / std::pow(2000.0, a)) / (laguerre_h(a, 1000) / std::pow(1000.0, a));
    EXPECT_NEAR(ratio, 1.0, 2e-2);
  }
  // Gauss–Laguerre cross-check of h_2^{(1)}.
  const QuadratureRule rule = gauss_rule(LaguerreMeasure{1.0}, 6);
  EXPECT_NEAR(rule.sum([](double x) {
    const double l = laguerre_eval(1.0, 2, x);
    return l * l;
  }),
              3.0, 1e-12);
}

TEST(LaguerreFunction, ClosedForms) {
  for (double x : {0.0, 0.7, 12.0}) EXPECT_NEAR(laguerre_fn_eval(0.0, 0, x), std::exp(-x / 2), 1e-15);
  EXPECT_NEAR(laguerre_fn_eval(0.0, 1, 2.0), -std::exp(-1.0), 1e-15);
  EXPECT_THROW(laguerre_fn_eval(-0.5, 2, 0.0), std::domain_error);
}

TEST(LaguerreFunction, MatchesPolynomialDefinition) {
  for (double a : {0.0, 0.5, 2.0}) {
    for (int n : {3, 10, 25}) {
      for (double x : {0.3, 2.0, 15.0}) {
        // The plain polynomial recurrence, not the explicit sum, which cancels badly at x = 15.
        const double ref = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + a + 1.0)) - x / 2) *
                           std::pow(x, a / 2) * laguerre_eval(a, n, x);
        EXPECT_NEAR(laguerre_fn_eval(a, n, x), ref, 1e-9 * std::max(1e-3, std::abs(ref)));
      }
    }
  }
}

TEST(LaguerreFunction, NoOverflowForLargeDegree) {
  const Eigen::VectorXd v = laguerre_fn_eval_all(0.5, 100000, 1000.0);
  EXPECT_TRUE(v.allFinite());
  EXPECT_GT(v.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(v.cwiseAbs().maxCoeff(), 1.0);
}

TEST(LaguerreFunction, OrthonormalityMatrix) {
  // ℒ_m ℒ_n dx is a polynomial against e^{-x} x^α dx, so the Gauss–Laguerre rule
  // of that α is exact once the e^{-x} x^α factor is divided out.
  for (double a : {0.0, 0.5, 2.0}) {
    const QuadratureRule rule = gauss_rule(LaguerreMeasure{a}, 60);
    Eigen::MatrixXd V(rule.nodes.size(), 51);
    Eigen::VectorXd w(rule.nodes.size());
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      V.row(i) = laguerre_fn_eval_all(a, 50, x).transpose();
      w[i] = rule.weights[i] * std::exp(x) * std::pow(x, -a);
    }
    const Eigen::MatrixXd G = V.transpose() * w.asDiagonal() * V;
    for (int m = 0; m <= 50; ++m) {
      EXPECT_NEAR(G(m, m), 1.0, 1e-9);
      for (int n = 0; n < m; ++n) EXPECT_LE(std::abs(G(m, n)), 1e-10);
    }
  }
}

TEST(LaguerreFunction, UnitNormByAdaptiveQuadrature) {
  for (auto [a, n] : {std::pair{0.0, 3}, {0.5, 10}, {2.0, 25}}) {
    const double norm = laguerre_fn_norm(a, n, 2.0, {1e-12, 1e-300, 20});
    EXPECT_NEAR(norm * norm, 1.0, 1e-9);
  }
}

TEST(LaguerreAsymptotic, AmplitudeAndZeroPhase) {
  const AsymptoticMainTerm<double> t = laguerre_main_term(0.0, 400, 1.0);
  EXPECT_NEAR(t.amplitude, std::exp(0.5) / std::sqrt(std::numbers::pi) * std::pow(400.0, -0.25), 1e-15);
  EXPECT_NEAR(t.amplitude, 0.2080, 5e-5);
  const int n = 50;
  // cos(2√(nx) - π/4) vanishes at 2√(nx) = 3π/4 + kπ.
  for (int k = 0; k < 3; ++k) {
    const double s = (3 * std::numbers::pi / 4 + k * std::numbers::pi) / (2 * std::sqrt(n));
    EXPECT_NEAR(laguerre_asymptotic(0.0, n, s * s), 0.0, 1e-14);
  }
  EXPECT_THROW(laguerre_asymptotic(0.0, 5, 0.0), std::domain_error);
}

TEST(LaguerreAsymptotic, ResidualOrder) {
  for (double a : {0.0, 0.5}) {
    for (double x : {0.5, 1.0, 4.0}) {
      std::vector<double> ns, env;
      for (int n : geometric_grid(100, 2000, 12)) {
        ns.push_back(n);
        env.push_back(laguerre_residual_envelope(a, n, x));
      }
      const GrowthFit fit = fit_growth_exponent(ns, env);
      EXPECT_GT(fit.slope, -0.95) << a << " " << x;
      EXPECT_LT(fit.slope, -0.55) << a << " " << x;
    }
  }
}

TEST(FamilyRecurrence, DispatchesToBothFamilies) {
  const auto j = FamilySpec::jacobi(0.5, 0.0);
  const auto l = FamilySpec::laguerre(1.0);
  EXPECT_NEAR(family_eval_all(j, 10, 0.3)[10], jacobi_eval(j, 10, 0.3), 1e-15);
  EXPECT_NEAR(family_eval_all(l, 10, 3.0)[10], laguerre_fn_eval(1.0, 10, 3.0), 1e-15);
  EXPECT_EQ(family_h(l, 7), 1.0);
  EXPECT_NEAR(family_h(j, 7), jacobi_h(j, 7), 0);
}
