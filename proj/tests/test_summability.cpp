#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ortholab/orthopoly.hpp"
#include "ortholab/quadrature.hpp"
#include "ortholab/summability.hpp"

using namespace ortholab;

namespace {

const FamilySpec kLegendre = FamilySpec::jacobi(0, 0);

// Series with a single nonzero coefficient c_k = h_k, i.e. f = φ_k.
CoefficientSeries single(const FamilySpec& fam, int k, int n_max) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
  c[k] = family_h(fam, k);
  return CoefficientSeries::from_coefficients(fam, c);
}

CoefficientSeries expand(const FamilySpec& fam, std::function<double(double)> f, int n_max, int resolve = 0) {
  const auto pf = PanelFunction::single({-1, 1}, std::move(f), resolve);
  return CoefficientSeries::from_coefficients(fam, coefficient_vector(pf, fam, n_max));
}

double quartile_mean(const Eigen::VectorXd& g, bool last) {
  const Eigen::Index q = g.size() / 4;
  return last ? g.tail(q).mean() : g.head(q).mean();
}

}  // namespace

TEST(Series, Validation) {
  EXPECT_THROW(CoefficientSeries::from_coefficients(kLegendre, Eigen::VectorXd()), std::invalid_argument);
  CoefficientSeries s{kLegendre, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(2)};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.h = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  const auto lag = CoefficientSeries::from_coefficients(FamilySpec::laguerre(0.5), Eigen::VectorXd::Ones(4));
  EXPECT_TRUE((lag.h.array() == 1.0).all());
}

TEST(Cesaro, ConstantFunctionIsReproducedEverywhere) {
  for (auto fam : {kLegendre, FamilySpec::jacobi(0.5, 0), FamilySpec::jacobi(1.5, -0.3)}) {
    const auto s = single(fam, 0, 30);
    for (double delta : {-0.5, 0.0, 0.4, 1.0, 3.0}) {
      for (int N : {0, 1, 17, 30}) {
        for (double x : {-0.9, 0.0, 0.77}) EXPECT_NEAR(cesaro_mean(s, N, delta, x), 1.0, 1e-14);
      }
    }
  }
}

TEST(Cesaro, DeltaZeroIsThePartialSum) {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  Eigen::VectorXd c(41);
  for (auto& v : c) v = nd(rng);
  const auto s = CoefficientSeries::from_coefficients(FamilySpec::jacobi(0.5, 0), c);
  for (int N : {0, 5, 22, 40}) {
    for (double x : {-0.4, 0.3, 0.99}) {
      EXPECT_EQ(cesaro_mean(s, N, 0.0, x), riesz_mean(s, N + 0.5, 0.0, x));
      EXPECT_EQ(cesaro_mean(s, N, 0.0, x), partial_sum(s, N + 0.5, x));
    }
  }
}

TEST(Cesaro, FejerMeansOfXConverge) {
  // Only the n = 1 term survives, with weight 1 - 1/(N+1): the error is x/(N+1).
  const auto s = expand(kLegendre, [](double x) { return x; }, 400);
  EXPECT_NEAR(cesaro_mean(s, 50, 1.0, 0.3), 0.3 * 50 / 51, 1e-13);
  EXPECT_NEAR(cesaro_mean(s, 400, 1.0, 0.3), 0.3, 1e-3);
}

TEST(Cesaro, IndexErrors) {
  const auto s = single(kLegendre, 0, 5);
  EXPECT_THROW(cesaro_mean(s, 6, 1.0, 0.0), std::out_of_range);
  EXPECT_THROW(cesaro_mean(s, -1, 1.0, 0.0), std::out_of_range);
  EXPECT_THROW(cesaro_mean(s, 3, -1.0, 0.0), std::domain_error);
  EXPECT_THROW(riesz_mean(s, 7.5, 1.0, 0.0), std::out_of_range);
  EXPECT_THROW(riesz_mean(s, 3.0, -0.1, 0.0), std::domain_error);
  EXPECT_THROW(riesz_mean(s, 0.0, 1.0, 0.0), std::domain_error);
}

TEST(Riesz, Examples) {
  const auto s1 = single(FamilySpec::jacobi(0.5, 0), 1, 6);
  for (double r : {1.5, 2.0, 5.5}) {
    for (double delta : {0.0, 0.5, 2.0}) {
      const double x = 0.37;
      EXPECT_NEAR(riesz_mean(s1, r, delta, x),
                  std::pow(1 - 1 / r, delta) * jacobi_eval(FamilySpec::jacobi(0.5, 0), 1, x), 1e-14);
    }
  }
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(8, 0.0, 7.0);
  const auto s = CoefficientSeries::from_coefficients(kLegendre, c);
  EXPECT_EQ(riesz_mean(s, 1.0, 1.0, 0.2), 0.0);
  EXPECT_EQ(riesz_mean(s, 0.5, 0.0, 0.2), 0.0);
  const Eigen::VectorXd t = s.terms(0.2);
  EXPECT_NEAR(riesz_mean(s, 5.5, 0.0, 0.2), t.head(6).sum(), 1e-14);
}

TEST(Riesz, IntegerRExcludesTheBoundaryTerm) {
  Eigen::VectorXd c = Eigen::VectorXd::Ones(6);
  const auto s = CoefficientSeries::from_coefficients(kLegendre, c);
  const Eigen::VectorXd t = s.terms(0.6);
  EXPECT_NEAR(partial_sum(s, 3.0, 0.6), t.head(3).sum(), 1e-15);
}

TEST(Summation, DispatchAndSpecValidation) {
  const auto s = expand(kLegendre, [](double x) { return std::exp(x); }, 20);
  EXPECT_EQ(evaluate(s, {SummationMethod::Cesaro, 12, 0.7}, 0.1), cesaro_mean(s, 12, 0.7, 0.1));
  EXPECT_EQ(evaluate(s, {SummationMethod::Riesz, 9.5, 1.2}, 0.1), riesz_mean(s, 9.5, 1.2, 0.1));
  EXPECT_EQ(evaluate(s, {SummationMethod::PartialSum, 9.5, 0.0}, 0.1), partial_sum(s, 9.5, 0.1));
  EXPECT_THROW((SummationSpec{SummationMethod::PartialSum, 3.5, 0.2}).validate(), std::domain_error);
  EXPECT_THROW((SummationSpec{SummationMethod::Cesaro, 2.5, 0.2}).validate(), std::domain_error);
  EXPECT_THROW((SummationSpec{SummationMethod::Riesz, 3.5, -0.2}).validate(), std::domain_error);
}

TEST(BatchMeans, AgreeWithPointwiseEvaluation) {
  const auto s = expand(FamilySpec::jacobi(0.5, 0), [](double x) { return std::abs(x - 0.2); }, 40);
  const double x = -0.35;
  const Eigen::VectorXd t = s.terms(x);
  const Eigen::VectorXd cm = cesaro_means(t, 0.6, 40);
  for (int N = 0; N <= 40; ++N) EXPECT_NEAR(cm[N], cesaro_mean(s, N, 0.6, x), 1e-13);
  const std::vector<double> rs{0.5, 3.0, 10.25, 41.0};
  const Eigen::VectorXd rm = riesz_means(t, 1.5, rs);
  for (size_t i = 0; i < rs.size(); ++i) EXPECT_NEAR(rm[i], riesz_mean(s, rs[i], 1.5, x), 1e-13);
}

TEST(Properties, Linearity) {
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  const auto fam = FamilySpec::jacobi(0.5, 0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd a(31), b(31);
    for (auto& v : a) v = nd(rng);
    for (auto& v : b) v = nd(rng);
    const double la = nd(rng), lb = nd(rng);
    const auto sa = CoefficientSeries::from_coefficients(fam, a);
    const auto sb = CoefficientSeries::from_coefficients(fam, b);
    const auto sab = CoefficientSeries::from_coefficients(fam, la * a + lb * b);
    for (double x : {-0.8, 0.1, 0.6}) {
      const double c = cesaro_mean(sab, 30, 0.7, x);
      EXPECT_NEAR(c, la * cesaro_mean(sa, 30, 0.7, x) + lb * cesaro_mean(sb, 30, 0.7, x), 1e-12 * (1 + std::abs(c)));
      const double r = riesz_mean(sab, 25.5, 1.3, x);
      EXPECT_NEAR(r, la * riesz_mean(sa, 25.5, 1.3, x) + lb * riesz_mean(sb, 25.5, 1.3, x), 1e-12 * (1 + std::abs(r)));
    }
  }
}

TEST(Properties, PolynomialReproduction) {
  for (auto fam : {kLegendre, FamilySpec::jacobi(0.5, 0), FamilySpec::jacobi(-0.5, -0.5)}) {
    for (int d : {2, 7, 15}) {
      auto poly = [d](double x) {
        double v = 0.0;
        for (int j = d; j >= 0; --j) v = v * x + 1.0 / (j + 1);
        return v;
      };
      const auto s = expand(fam, poly, d + 4, d);
      for (double x = -0.95; x < 1.0; x += 0.15) EXPECT_NEAR(partial_sum(s, d + 0.5, x), poly(x), 1e-9);
      EXPECT_NEAR(partial_sum(s, d + 3.5, 0.42), poly(0.42), 1e-9);
    }
  }
}

TEST(Properties, TermRecovery) {
  const auto s = expand(FamilySpec::jacobi(0.5, 0), [](double x) { return std::abs(x); }, 30);
  for (double x : {-0.5, 0.25}) {
    const Eigen::VectorXd t = s.terms(x);
    EXPECT_EQ(partial_sum(s, 0.5, x), t[0]);
    for (int n = 1; n <= 30; ++n) {
      EXPECT_NEAR(partial_sum(s, n + 0.5, x) - partial_sum(s, n - 0.5, x), t[n], 1e-14);
    }
  }
}

TEST(Properties, RieszFactorsInUnitIntervalAndDecreasing) {
  // Legendre P_n(1) = 1, so the mean of f = φ_n at x = 1 is the factor itself.
  for (double delta : {0.0, 0.5, 2.0}) {
    const double r = 12.5;
    double prev = 1.0;
    for (int n = 0; n < 13; ++n) {
      const auto s = single(kLegendre, n, 12);
      const double factor = riesz_mean(s, r, delta, 1.0);
      EXPECT_GE(factor, 0.0);
      EXPECT_LE(factor, prev + 1e-15);
      prev = factor;
    }
  }
}

TEST(TermGrowth, Examples) {
  const auto one = single(kLegendre, 0, 20);
  const auto r1 = term_growth_check(one, 1.0, 0.3, 20);
  EXPECT_FALSE(r1.degenerate);
  EXPECT_EQ(r1.max_ratio, 0.0);

  const auto p5 = single(kLegendre, 5, 20);
  const auto r5 = term_growth_check(p5, 1.0, 0.3, 20);
  EXPECT_FALSE(r5.degenerate);
  EXPECT_TRUE(std::isfinite(r5.max_ratio));
  EXPECT_EQ(r5.argmax_n, 5);

  const auto x2 = expand(kLegendre, [](double x) { return x * x; }, 200);
  const auto r = term_growth_check(x2, 1.0, 0.4, 200);
  EXPECT_LE(r.ratios.segment(50, 151).maxCoeff(), r.ratios.segment(1, 50).maxCoeff());

  const auto zero = CoefficientSeries::from_coefficients(kLegendre, Eigen::VectorXd::Zero(5));
  EXPECT_TRUE(term_growth_check(zero, 1.0, 0.3, 4).degenerate);
  EXPECT_THROW(term_growth_check(one, 1.0, 0.3, 0), std::out_of_range);
}

TEST(PartialSumControl, Examples) {
  const auto p0 = single(kLegendre, 0, 60);
  const auto r0 = partial_sum_control_check(p0, 1.0, 0.3, 50.5);
  for (size_t i = 0; i < r0.r_grid.size(); ++i) {
    if (r0.r_grid[i] >= 1.0) EXPECT_EQ(r0.ratios[i], 0.0);
  }

  const auto p3 = single(kLegendre, 3, 60);
  const auto r3 = partial_sum_control_check(p3, 1.0, 0.3, 50.5);
  EXPECT_FALSE(r3.degenerate);
  EXPECT_TRUE(std::isfinite(r3.max_ratio));
  EXPECT_LT(r3.max_ratio, 10.0);

  const auto abs = expand(kLegendre, [](double x) { return std::abs(x); }, 402);
  const auto ra = partial_sum_control_check(abs, 1.0, 0.5, 400.5);
  EXPECT_TRUE(std::isfinite(ra.max_ratio));
  // Bounded: the second half of the grid does not outgrow the first.
  const Eigen::Index half = ra.ratios.size() / 2;
  EXPECT_LE(ra.ratios.tail(ra.ratios.size() - half).maxCoeff(), 2.0 * ra.ratios.head(half).maxCoeff());

  EXPECT_THROW(partial_sum_control_check(p3, 0.0, 0.3, 10.5), std::domain_error);
  EXPECT_THROW(partial_sum_control_check(p3, 1.0, 0.3, 80.5), std::out_of_range);
}

TEST(Equivalence, Examples) {
  std::vector<int> grid;
  for (int N = 10; N <= 200; ++N) grid.push_back(N);

  const auto one = single(kLegendre, 0, 201);
  EXPECT_LT(equivalence_probe(one, 0.7, 0.2, grid).maxCoeff(), 1e-15);

  const auto x3 = expand(kLegendre, [](double x) { return x * x * x; }, 201, 3);
  EXPECT_LT(equivalence_probe(x3, 0.0, 0.2, grid).maxCoeff(), 1e-12);

  // At δ = 1 the Cesàro weight (N-n+1)/(N+1) is the Riesz weight at r = N+1, so the gap is rounding only.
  const Eigen::VectorXd g1 = equivalence_probe(x3, 1.0, 0.2, grid);
  EXPECT_LT(g1[g1.size() - 1], 1e-3);
  EXPECT_LT(g1.maxCoeff(), 1e-13);

  for (double delta : {0.5, 2.0}) {
    const Eigen::VectorXd g = equivalence_probe(x3, delta, 0.2, grid);
    EXPECT_LT(quartile_mean(g, true), quartile_mean(g, false)) << "delta = " << delta;
    EXPECT_LT(g[g.size() - 1], 1e-3);
  }
}

TEST(Equivalence, NonSmoothFunctionGapsShrink) {
  std::vector<int> grid;
  for (int N = 10; N <= 200; N += 2) grid.push_back(N);
  const auto abs = expand(FamilySpec::jacobi(0.5, 0), [](double x) { return std::abs(x); }, 201);
  const Eigen::VectorXd g = equivalence_probe(abs, 0.5, 0.3, grid);
  EXPECT_LT(quartile_mean(g, true), quartile_mean(g, false));
}
