#ifndef ORTHOLAB_SUMMABILITY_HPP_
#define ORTHOLAB_SUMMABILITY_HPP_

#include <vector>

#include <Eigen/Core>

#include "ortholab/family.hpp"

namespace ortholab {

/// Coefficients c_0..c_N of an expansion together with the normalizers h_n.
struct CoefficientSeries {
  FamilySpec family;
  Eigen::VectorXd c;
  Eigen::VectorXd h;

  /// Fills h from the family (jacobi_h, or 1 for Laguerre functions).
  static CoefficientSeries from_coefficients(const FamilySpec& family, Eigen::VectorXd c);

  int n_max() const { return static_cast<int>(c.size()) - 1; }

  /// c_n h_n^{-1} φ_n(x) for n = 0..n_max.
  Eigen::VectorXd terms(double x) const;

  void validate() const;
};

enum class SummationMethod { Cesaro, Riesz, PartialSum };

/// Cesaro: `order` is N. Riesz and PartialSum: `order` is r (PartialSum forces δ = 0).
struct SummationSpec {
  SummationMethod method = SummationMethod::Cesaro;
  double order = 0.0;
  double delta = 0.0;

  void validate() const;
};

/// σ_N^δ f(x) = Σ_{n≤N} (A_{N-n}^δ / A_N^δ) c_n h_n^{-1} φ_n(x).
double cesaro_mean(const CoefficientSeries& s, int N, double delta, double x);

/// S_r^δ f(x) = Σ_{0≤n<r} (1 - n/r)^δ c_n h_n^{-1} φ_n(x).
double riesz_mean(const CoefficientSeries& s, double r, double delta, double x);

double partial_sum(const CoefficientSeries& s, double r, double x);

double evaluate(const CoefficientSeries& s, const SummationSpec& spec, double x);

/// σ_0^δ, ..., σ_{N_max}^δ at x from precomputed terms, O(N_max²).
Eigen::VectorXd cesaro_means(const Eigen::VectorXd& terms, double delta, int N_max);

/// S_r^δ at x for each r in the grid, from precomputed terms.
Eigen::VectorXd riesz_means(const Eigen::VectorXd& terms, double delta, const std::vector<double>& r_grid);

struct TermGrowthReport {
  double max_ratio = 0.0;
  int argmax_n = 0;
  bool degenerate = false;  // every σ_m vanished, ratios undefined
  Eigen::VectorXd ratios;   // index n, entry 0 unused
};

/// ratio_n = |c_n h_n^{-1} φ_n(x)| / (n^δ max_{m≤n} |σ_m^δ f(x)|), 1 ≤ n ≤ N_max.
TermGrowthReport term_growth_check(const CoefficientSeries& s, double delta, double x, int N_max);

struct PartialSumControlReport {
  double max_ratio = 0.0;
  double limit_proxy = 0.0;
  bool degenerate = false;
  std::vector<double> r_grid;
  Eigen::VectorXd ratios;
};

/// sup over r = 1/2, 3/2, ... ≤ r_max of
///   |S_r^0 - c| / (r^δ sup_{0<t≤r+1} |S_t^δ - c|),  c = S_{r_max}^δ.
/// The inner sup runs over t on a quarter-integer grid.
PartialSumControlReport partial_sum_control_check(const CoefficientSeries& s, double delta, double x,
                                                  double r_max);

/// |σ_N^δ - S_{N+1}^δ| at x for each N in the grid.
Eigen::VectorXd equivalence_probe(const CoefficientSeries& s, double delta, double x,
                                  const std::vector<int>& N_grid);

}  // namespace ortholab

#endif  // ORTHOLAB_SUMMABILITY_HPP_
