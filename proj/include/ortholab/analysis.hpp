#ifndef ORTHOLAB_ANALYSIS_HPP_
#define ORTHOLAB_ANALYSIS_HPP_

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ortholab/family.hpp"
#include "ortholab/quadrature.hpp"

namespace ortholab {

/// Finite union of disjoint closed intervals.
struct IntervalSet {
  std::vector<Interval> intervals;

  double measure() const;
  void validate() const;
};

/// χ̂_E(ξ) = ∫_E e^{-iξθ} dθ, in closed form.
std::complex<double> chi_hat(const IntervalSet& E, double xi);

/// √(2 I_n / |E|) with I_n = ∫_E F(n, θ)² dθ, for each n in the grid.
Eigen::VectorXd cantor_lebesgue_estimate(const std::function<double(int, double)>& F,
                                         const IntervalSet& E, const std::vector<int>& n_grid,
                                         const Tolerance& tol = {1e-10, 1e-14, 20});

/// (∫_0^1 |P_n^{(α,β)}(x) (1-x)^r|^q dx)^{1/q}.
double jacobi_weighted_norm(const FamilySpec& family, int n, double q, double r,
                            const Tolerance& tol = {1e-8, 1e-300, 20});

/// L^q(dx) norm of ℒ_n^α on [0, ∞). q = ∞ gives the maximum over a fine grid.
double laguerre_fn_norm(double alpha, int n, double q, const Tolerance& tol = {1e-8, 1e-300, 20});

struct CriticalIndices {
  double p_c;
  double p_c_conj;
};

/// p_c = 4(α+1)/(2α+3) and its conjugate 4(α+1)/(2α+1).
CriticalIndices critical_indices(double alpha);

/// (2α+2)/p - (2α+3)/2 for any p ≥ 1, no range check.
double jacobi_delta_exponent(double alpha, double p);

/// Admissible δ ceiling for Jacobi divergence; throws for p > p_c, 0 at p = p_c.
double jacobi_delta_bound(double alpha, double p);

/// 1/4 - 1/p for p > 4.
double laguerre_delta_bound(double p);

struct GrowthFit {
  double slope;
  double intercept;
  double ci;  // two standard errors of the slope
};

/// Least squares on (log n, log value) over the upper half of the grid.
GrowthFit fit_growth_exponent(const std::vector<double>& n_grid, const std::vector<double>& values);

enum class Regime { Flat, FlatLog, Growth, Unpredicted };

std::string regime_name(Regime r);

struct RegimePrediction {
  Regime regime;
  double exponent;   // NaN when unpredicted
  double threshold;  // Jacobi: α/2 + 1/4 - 1/q
};

RegimePrediction predicted_jacobi_regime(double alpha, double q, double r);

/// q < 2: 1/q - 1/2. q = 4: -1/4 with a log factor. q > 4: -1/q. 2 ≤ q < 4: none.
RegimePrediction predicted_laguerre_regime(double q);

/// Slope range accepted for a prediction: ±0.07 around the exponent, and
/// fixed windows for the log-corrected cases.
struct SlopeWindow {
  double lo;
  double hi;
  bool contains(double s) const { return s > lo && s < hi; }
};

SlopeWindow slope_window(const FamilySpec& family, const RegimePrediction& p);

struct NormScan {
  FamilySpec family;
  double q = 2.0;
  double r = 0.0;
  std::vector<int> n_grid;
  std::vector<double> values;
  GrowthFit fit{};
  RegimePrediction prediction{};
};

NormScan jacobi_norm_scan(const FamilySpec& family, double q, double r, const std::vector<int>& n_grid);
NormScan laguerre_norm_scan(double alpha, double q, const std::vector<int>& n_grid);

/// Geometric grid round(n_min · ratio^j) up to n_max, duplicates removed.
std::vector<int> geometric_grid(int n_min, int n_max, int points);

/// Max of |P_m(cos θ) - main term| over one phase period m ∈ [n, n + ⌈2π/θ⌉].
double jacobi_residual_envelope(const FamilySpec& family, int n, double theta);

/// Max of |L_m^{(α)}(x) - Fejér main term| / m^{α/2} over one phase period
/// m ∈ [n, n + 2π√(n/x)].
double laguerre_residual_envelope(double alpha, int n, double x);

}  // namespace ortholab

#endif  // ORTHOLAB_ANALYSIS_HPP_
