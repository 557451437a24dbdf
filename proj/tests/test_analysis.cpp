#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ortholab/analysis.hpp"
#include "ortholab/orthopoly.hpp"

using namespace ortholab;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson; the oracle for smooth integrands below.
template <class F>
auto simpson(F f, double a, double b, int m) {
  const double h = (b - a) / (2 * m);
  auto s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3);
}

}  // namespace

TEST(IntervalSet, MeasureAndValidation) {
  EXPECT_NEAR((IntervalSet{{{0.7, 1.4}, {2.0, 2.6}}}).measure(), 1.3, 1e-15);
  EXPECT_THROW((IntervalSet{{}}).validate(), std::domain_error);
  EXPECT_THROW((IntervalSet{{{1.0, 1.0}}}).validate(), std::domain_error);
  EXPECT_THROW((IntervalSet{{{0.0, 1.0}, {0.5, 2.0}}}).validate(), std::domain_error);
}

TEST(ChiHat, Examples) {
  EXPECT_NEAR(std::abs(chi_hat({{{0, 2 * kPi}}}, 1.0)), 0.0, 1e-15);
  const IntervalSet E{{{0.7, 1.4}, {2.0, 2.6}}};
  EXPECT_EQ(chi_hat(E, 0.0), std::complex<double>(E.measure(), 0.0));
  const double xi = 37.3;
  auto integrand = [xi](double t) { return std::exp(std::complex<double>(0, -xi * t)); };
  const std::complex<double> ref = simpson(integrand, 0.7, 1.4, 20000) + simpson(integrand, 2.0, 2.6, 20000);
  EXPECT_NEAR(std::abs(chi_hat(E, xi) - ref), 0.0, 1e-10);
}

TEST(ChiHat, DecayBound) {
  const IntervalSet E{{{0.1, 0.4}, {0.9, 1.7}, {2.2, 3.0}}};
  for (double xi = 1.0; xi < 1e4; xi *= 1.09) {
    EXPECT_LE(std::abs(chi_hat(E, xi)), 2.0 * 3 / xi + 1e-15);
    EXPECT_LE(std::abs(chi_hat(E, -xi)), 2.0 * 3 / xi + 1e-15);
  }
}

TEST(CantorLebesgue, ConstantAmplitudeCosine) {
  const IntervalSet E{{{0.5, 2.5}}};
  const auto est = cantor_lebesgue_estimate([](int n, double t) { return 5 * std::cos(n * t); }, E, {200});
  EXPECT_NEAR(est[0], 5.0, 0.05 * 5.0);
  const auto zero = cantor_lebesgue_estimate([](int, double) { return 0.0; }, E, {10, 100});
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_EQ(zero[1], 0.0);
}

TEST(CantorLebesgue, ErrorShrinksLikeOneOverM) {
  const IntervalSet E{{{0.3, 1.1}, {1.6, 2.9}}};
  std::vector<int> grid{100, 200, 400, 800, 1600};
  const double A = 2.5;
  const auto est = cantor_lebesgue_estimate([A](int M, double t) { return A * std::cos(M * t + 0.4); }, E, grid);
  for (size_t i = 0; i < grid.size(); ++i) EXPECT_LE(std::abs(est[i] - A) / A, 10.0 / grid[i]);
}

TEST(CantorLebesgue, LegendreRecoversQuadraticMeanOfK) {
  const auto fam = FamilySpec::jacobi(0, 0);
  const IntervalSet E{{{0.5, 1.2}}};
  // Legendre: k(θ)² = 1/(π sin(θ/2) cos(θ/2)) = 2/(π sin θ).
  const double target =
      std::sqrt(simpson([](double t) { return 2 / (kPi * std::sin(t)); }, 0.5, 1.2, 2000) / E.measure());
  const std::vector<int> grid{500, 800, 1200};
  const auto est = cantor_lebesgue_estimate(
      [&](int n, double t) { return std::sqrt(double(n)) * jacobi_eval(fam, n, std::cos(t)); }, E, grid);
  for (size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(est[i], target, 0.10 * target) << "n = " << grid[i];
}

TEST(JacobiWeightedNorm, Examples) {
  for (auto [q, r] : {std::pair{1.0, 0.0}, {2.0, 0.5}, {3.0, -0.2}}) {
    EXPECT_NEAR(jacobi_weighted_norm(FamilySpec::jacobi(0.5, 0), 0, q, r), std::pow(1 / (r * q + 1), 1 / q), 1e-9);
  }
  EXPECT_NEAR(jacobi_weighted_norm(FamilySpec::jacobi(0, 0), 1, 2.0, 0.0), 1 / std::sqrt(3.0), 1e-9);
}

TEST(JacobiWeightedNorm, AgreesWithSimpsonForSmoothCases) {
  const auto fam = FamilySpec::jacobi(0.5, 0);
  for (int n : {3, 10, 25}) {
    for (double q : {2.0, 4.0}) {
      const double ref = std::pow(
          simpson([&](double x) { return std::pow(std::abs(jacobi_eval(fam, n, x) * (1 - x)), q); }, 0.0, 1.0, 20000),
          1 / q);
      EXPECT_NEAR(jacobi_weighted_norm(fam, n, q, 1.0), ref, 1e-8 * ref);
    }
  }
}

TEST(JacobiWeightedNorm, Errors) {
  const auto fam = FamilySpec::jacobi(0.5, 0);
  EXPECT_THROW(jacobi_weighted_norm(FamilySpec::laguerre(0), 3, 2, 0), std::invalid_argument);
  EXPECT_THROW(jacobi_weighted_norm(fam, 3, 0.5, 0), std::domain_error);
  EXPECT_THROW(jacobi_weighted_norm(fam, 3, 2, -0.5), std::domain_error);
  EXPECT_THROW(jacobi_weighted_norm(fam, -1, 2, 0), std::out_of_range);
}

TEST(LaguerreNorm, Examples) {
  EXPECT_NEAR(laguerre_fn_norm(0.0, 0, 2.0), 1.0, 1e-8);
  EXPECT_NEAR(laguerre_fn_norm(0.0, 0, 1.0), 2.0, 2e-8);
  EXPECT_NEAR(laguerre_fn_norm(0.0, 0, std::numeric_limits<double>::infinity()), 1.0, 1e-12);
  for (auto [a, n] : {std::pair{0.5, 10}, {2.0, 25}}) EXPECT_NEAR(laguerre_fn_norm(a, n, 2.0), 1.0, 1e-8);
  EXPECT_THROW(laguerre_fn_norm(-0.6, 3, 2.0), std::domain_error);
  EXPECT_THROW(laguerre_fn_norm(0.0, 3, 0.9), std::domain_error);
}

TEST(Regimes, JacobiPredictions) {
  const auto flat = predicted_jacobi_regime(0.5, 2, 0.5);
  EXPECT_EQ(flat.regime, Regime::Flat);
  EXPECT_EQ(flat.exponent, -0.5);
  EXPECT_NEAR(predicted_jacobi_regime(0.5, 2, 0.0).threshold, 0.0, 1e-15);
  EXPECT_EQ(predicted_jacobi_regime(0.5, 2, 0.0).regime, Regime::FlatLog);
  const auto grow = predicted_jacobi_regime(1, 4, 0);
  EXPECT_EQ(grow.regime, Regime::Growth);
  EXPECT_NEAR(grow.exponent, 0.5, 1e-15);
  EXPECT_NEAR(grow.threshold, 0.5, 1e-15);
}

TEST(Regimes, LaguerrePredictions) {
  EXPECT_NEAR(predicted_laguerre_regime(1.5).exponent, 1 / 1.5 - 0.5, 1e-15);
  EXPECT_EQ(predicted_laguerre_regime(4).regime, Regime::FlatLog);
  EXPECT_NEAR(predicted_laguerre_regime(6).exponent, -1.0 / 6, 1e-15);
  const auto none = predicted_laguerre_regime(3);
  EXPECT_EQ(none.regime, Regime::Unpredicted);
  EXPECT_TRUE(std::isnan(none.exponent));
  EXPECT_EQ(regime_name(Regime::FlatLog), "flat-log");
}

TEST(Regimes, MeasuredSlopesAwayFromTheBoundary) {
  const auto fam = FamilySpec::jacobi(0.5, 0);
  const auto grid = geometric_grid(64, 1024, 12);
  for (auto [q, r] : {std::pair{2.0, 0.5}, {2.0, -0.3}, {4.0, 0.6}}) {
    const auto scan = jacobi_norm_scan(fam, q, r, grid);
    ASSERT_GE(std::abs(r - scan.prediction.threshold), 0.1);
    EXPECT_NEAR(scan.fit.slope, scan.prediction.exponent, 0.07) << "q=" << q << " r=" << r;
    EXPECT_TRUE(slope_window(fam, scan.prediction).contains(scan.fit.slope));
  }
}

TEST(CriticalIndices, ValuesAndConjugacy) {
  const auto c0 = critical_indices(0.0);
  EXPECT_DOUBLE_EQ(c0.p_c, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(c0.p_c_conj, 4.0);
  const auto ch = critical_indices(0.5);
  EXPECT_DOUBLE_EQ(ch.p_c, 1.5);
  EXPECT_DOUBLE_EQ(ch.p_c_conj, 3.0);
  for (double a = -0.45; a < 5; a += 0.17) {
    const auto c = critical_indices(a);
    EXPECT_NEAR(1 / c.p_c + 1 / c.p_c_conj, 1.0, 1e-15);
  }
  EXPECT_THROW(critical_indices(-0.5), std::domain_error);
}

TEST(DeltaBounds, JacobiValuesAndProofForm) {
  EXPECT_DOUBLE_EQ(jacobi_delta_bound(0.5, 1.0), 1.0);
  EXPECT_NEAR(jacobi_delta_bound(0.5, 1.5), 0.0, 1e-15);
  EXPECT_THROW(jacobi_delta_bound(0.5, 1.6), std::domain_error);
  EXPECT_THROW(jacobi_delta_bound(0.5, 0.9), std::domain_error);
  for (double a = -0.4; a < 3; a += 0.3) {
    const double pc = critical_indices(a).p_c;
    for (double p = 1.0; p < pc; p += 0.03) {
      const double q = p / (p - 1);
      const double proof_form = p == 1.0 ? a + 0.5 : a + 0.5 - (2 * a + 2) / q;
      EXPECT_NEAR(jacobi_delta_bound(a, p), proof_form, 1e-13);
      EXPECT_GT(jacobi_delta_bound(a, p), 0.0);
    }
    EXPECT_LT(jacobi_delta_exponent(a, pc + 0.01), 0.0);
  }
}

TEST(DeltaBounds, Laguerre) {
  EXPECT_DOUBLE_EQ(laguerre_delta_bound(8.0), 0.125);
  EXPECT_NEAR(laguerre_delta_bound(1e15), 0.25, 1e-14);
  EXPECT_THROW(laguerre_delta_bound(4.0), std::domain_error);
}

TEST(FitGrowth, Examples) {
  std::vector<double> n, sq, inv, logc;
  for (double v = 64; v <= 4096; v *= std::sqrt(2.0)) {
    n.push_back(v);
    sq.push_back(v * v);
    inv.push_back(3 / std::sqrt(v));
    logc.push_back(std::sqrt(std::log(v) / v));
  }
  EXPECT_NEAR(fit_growth_exponent(n, sq).slope, 2.0, 1e-10);
  EXPECT_NEAR(fit_growth_exponent(n, inv).slope, -0.5, 1e-10);
  EXPECT_NEAR(fit_growth_exponent(n, inv).intercept, std::log(3.0), 1e-10);
  const double s = fit_growth_exponent(n, logc).slope;
  EXPECT_GT(s, -0.5);
  EXPECT_LT(s, -0.3);
}

TEST(FitGrowth, Errors) {
  EXPECT_THROW(fit_growth_exponent({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
  std::vector<double> n{1, 2, 3, 4, 5, 6, 7, 8}, v(8, 1.0);
  v[3] = 0.0;
  EXPECT_THROW(fit_growth_exponent(n, v), std::domain_error);
  v[3] = 1.0;
  n[4] = 4;
  EXPECT_THROW(fit_growth_exponent(n, v), std::invalid_argument);
}

TEST(GeometricGrid, EndpointsAndMonotone) {
  const auto g = geometric_grid(128, 2048, 10);
  EXPECT_EQ(g.front(), 128);
  EXPECT_EQ(g.back(), 2048);
  for (size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
  EXPECT_EQ(geometric_grid(1, 4, 20).size(), 4u);
}
