#ifndef ORTHOLAB_WITNESS_HPP_
#define ORTHOLAB_WITNESS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "ortholab/family.hpp"
#include "ortholab/quadrature.hpp"

namespace ortholab {

/// Unit-L^p function g = sgn(ψ)|ψ|^{q-1} / ‖ψ‖_q^{q-1} on `support`, with
///   ψ = φ_n - Σ_i t_i φ_{annihilated_i}.
/// With no annihilated degrees this is the Hölder extremal of f ↦ c_n(f).
/// Otherwise t is the best L^q approximation of φ_n from the span of the
/// annihilated φ's, which makes c_m(g) vanish for those m.
struct DualExtremal {
  FamilySpec family;
  int n = 0;
  double p = 2.0;
  Interval support;
  std::vector<int> annihilated;
  Eigen::VectorXd t;
  double psi_norm = 0.0;  // ‖ψ‖_{L^q(support)}, equal to c_n(g)
  PanelFunction block;
};

/// Hölder extremal of c_n restricted to `support` (no annihilation).
PanelFunction dual_extremal(const FamilySpec& family, int n, double p, Interval support,
                            const Tolerance& tol = {});

DualExtremal annihilating_dual_extremal(const FamilySpec& family, int n, double p, Interval support,
                                        const std::vector<int>& annihilate, const Tolerance& tol = {});

/// Rebuilds a block from its metadata, no optimization.
DualExtremal dual_extremal_from(const FamilySpec& family, int n, double p, Interval support,
                                const std::vector<int>& annihilated, const Eigen::VectorXd& t,
                                const Tolerance& tol = {});

/// ‖ψ‖_{L^q(support)} for the ψ of a block (norm against the family's measure).
double psi_lq_norm(const DualExtremal& d, double q, const Tolerance& tol = {});

/// ‖g‖_{L^r(support)} of any panel function g against the family's measure.
double lp_norm(const PanelFunction& g, const FamilySpec& family, double r, const Tolerance& tol = {});

struct WitnessLevel {
  int k = 1;
  int n = 0;
  double amplitude = 1.0;
  DualExtremal block;
};

struct Witness {
  FamilySpec family;
  double p = 2.0;
  double delta = 0.0;
  Interval support;
  double lacunarity = 2.0;
  std::vector<WitnessLevel> levels;
  /// Column k holds c_0..c_N of level k's block.
  Eigen::MatrixXd block_coefficients;

  Eigen::VectorXd amplitudes() const;
  Eigen::VectorXd coefficients() const { return block_coefficients * amplitudes(); }
  /// f = Σ a_k g_k as a panel function (panels at the union of block breakpoints).
  PanelFunction function() const;
};

/// Fills block_coefficients up to degree N_max.
void compute_block_coefficients(Witness& w, int N_max, const Tolerance& tol = {});

/// ρ_k = |c_{n_k}(f)| / n_k^{δ-1/2} (Jacobi) or / n_k^{δ+1/4} (Laguerre).
Eigen::VectorXd witness_rho(const Witness& w);

/// True iff there are at least three levels and ρ_2 < ρ_3 < ... < ρ_K.
bool rho_increasing(const Eigen::VectorXd& rho);

struct BuildOptions {
  double lacunarity = 2.0;  // initial n_{k+1} / n_k, doubled on every retry
  int max_retries = 4;
  int max_degree = 8192;
  /// a_k = (n_k / n_1)^{-θ (bound - δ)}; k^{-2} when the gap is not positive.
  double amplitude_gap_fraction = 0.25;
  bool enforce_theorem_range = true;
  Tolerance tol{};
};

struct BuildAttempt {
  double lacunarity = 0.0;
  std::vector<int> degrees;
  Eigen::VectorXd rho;
  Eigen::VectorXd contamination;  // |c_{n_k}(Σ_{j≠k} a_j g_j)|
  Eigen::VectorXd own;            // a_k c_{n_k}(g_k)
  std::string reason;
};

class WitnessBuildFailure : public std::runtime_error {
 public:
  explicit WitnessBuildFailure(std::vector<BuildAttempt> attempts);
  const std::vector<BuildAttempt>& attempts() const { return attempts_; }

 private:
  std::vector<BuildAttempt> attempts_;
};

/// Admissible (p, δ) check for the divergence theorems; throws std::domain_error.
void require_witness_range(const FamilySpec& family, double p, double delta);

/// Gliding-hump witness f = Σ_{k=1}^K a_k g_k with n_k = n_1 L^{k-1}.
Witness build_witness(const FamilySpec& family, double p, double delta, int K, int n1,
                      const BuildOptions& options = {});

struct WitnessReport {
  Eigen::VectorXd rho;
  std::vector<double> x_samples;
  std::vector<int> N_grid;
  /// Row per sample: max over the N grid of |σ_N^δ f(x)| and |S_N^δ f(x)|.
  Eigen::MatrixXd mean_magnitudes;
  /// Row per sample, column k: max of |σ_N^δ f(x)| over grid points N ≤ n_k.
  Eigen::MatrixXd level_max_cesaro;
  bool bound_violation = false;
};

WitnessReport witness_report(Witness& w, const std::vector<double>& x_samples, const std::vector<int>& N_grid);

nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const WitnessReport& r);
/// Regenerates blocks from metadata; coefficients are left empty.
Witness witness_from_json(const nlohmann::json& j, const Tolerance& tol = {});

}  // namespace ortholab

#endif  // ORTHOLAB_WITNESS_HPP_
