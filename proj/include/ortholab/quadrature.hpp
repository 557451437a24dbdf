#ifndef ORTHOLAB_QUADRATURE_HPP_
#define ORTHOLAB_QUADRATURE_HPP_

#include <functional>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ortholab/errors.hpp"
#include "ortholab/family.hpp"

namespace ortholab {

/// (1-x)^α (1+x)^β dx on [-1, 1].
struct JacobiMeasure {
  double alpha = 0.0;
  double beta = 0.0;
};

/// e^{-x} x^α dx on [0, ∞).
struct LaguerreMeasure {
  double alpha = 0.0;
};

/// dx on [0, ∞).
struct HalfLineLebesgue {};

using Measure = std::variant<JacobiMeasure, LaguerreMeasure, HalfLineLebesgue>;

/// The measure the family's coefficients are taken against: μ_{α,β} for
/// Jacobi, Lebesgue measure for the orthonormal Laguerre functions.
Measure family_measure(const FamilySpec& family);

bool is_jacobi_measure(const Measure& m);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool bounded() const { return hi < std::numeric_limits<double>::infinity(); }
};

/// Gauss rule for one of the three measures.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Measure measure;
  int exactness_degree = 0;

  template <class F>
  double sum(F&& f) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Golub–Welsch construction with K nodes. For HalfLineLebesgue the rule is
/// Gauss–Laguerre (α = 0) with the e^{-x} factor moved into the weights, so it
/// is exact for e^{-x} times polynomials of degree ≤ 2K-1.
QuadratureRule gauss_rule(const Measure& measure, int K);

/// One smooth piece of a piecewise function. The exponents describe known
/// endpoint behaviour f ~ |x - end|^e (0 for smooth ends); the integrators fold
/// them analytically.
struct Panel {
  Interval interval;
  std::function<double(double)> f;
  double lo_exponent = 0.0;
  double hi_exponent = 0.0;
};

/// Piecewise function with disjoint, contiguous panels. resolve_degree is the
/// polynomial degree whose oscillation the integrators must resolve on it.
class PanelFunction {
 public:
  PanelFunction() = default;
  PanelFunction(std::vector<Panel> panels, int resolve_degree);

  static PanelFunction single(Interval support, std::function<double(double)> f,
                              int resolve_degree = 0);
  static PanelFunction constant(Interval support, double value);

  /// Value at x; 0 outside the support. At a shared breakpoint the left panel wins.
  double operator()(double x) const;

  Interval support() const { return {panels_.front().interval.lo, panels_.back().interval.hi}; }
  const std::vector<Panel>& panels() const { return panels_; }
  int resolve_degree() const { return resolve_degree_; }

 private:
  std::vector<Panel> panels_;
  int resolve_degree_ = 0;
};

/// Σ w_i f(x_i). A single panel spanning the whole measure support uses the
/// rule as is; otherwise every panel gets a K-node Gauss rule mapped onto it
/// with the measure's density folded in (endpoint powers handled by
/// Gauss–Jacobi subrules).
double integrate(const PanelFunction& f, const QuadratureRule& rule);

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-14;
  int max_doublings = 20;
};

// ---------------------------------------------------------------------------
// Composite engine

/// Integration interval with endpoint exponent hints, as for Panel.
struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  double lo_exponent = 0.0;
  double hi_exponent = 0.0;
};

struct NodeSet {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};

/// Composite rule on the segments for ∫ · dm. Each segment is cut into
/// subpanels uniform in θ = arccos x (Jacobi) or s = √x (half line), sized so a
/// degree-`resolve_degree` oscillation is resolved, then multiplied by 2^level.
/// Subpanels touching a singular end use Gauss–Jacobi nodes; the singular power
/// is divided back out of the weights so integrands are passed whole.
NodeSet composite_nodes(const Measure& m, std::span<const Segment> segments, int resolve_degree,
                        int level, int points_per_subpanel = 20);

/// Runs `estimate` on successively doubled composite rules until two
/// consecutive results agree: ‖Δ‖∞ ≤ rel·‖est‖∞ + abs.
Eigen::VectorXd integrate_adaptive(const Measure& m, std::span<const Segment> segments,
                                   int resolve_degree,
                                   const std::function<Eigen::VectorXd(const NodeSet&)>& estimate,
                                   const Tolerance& tol = {});

double integrate_adaptive(const Measure& m, std::span<const Segment> segments, int resolve_degree,
                          const std::function<double(double)>& f, const Tolerance& tol = {});

/// Segments of a panel function, clipped to [lo, hi].
std::vector<Segment> segments_of(const PanelFunction& f, double lo, double hi);

/// Sign changes of g on [lo, hi], refined to machine precision. The scan is
/// uniform in θ (Jacobi) or √x (half line) with a step fine enough for a
/// degree-`degree` oscillation.
std::vector<double> find_zeros(const std::function<double(double)>& g, double lo, double hi,
                               bool jacobi_warp, int degree);

/// Upper end used for Laguerre-function integrals at degree n: 8n + 8α + 16.
double laguerre_cutoff(double alpha, int n);

// ---------------------------------------------------------------------------
// Expansion coefficients

/// c_n(f) = ∫ f P_n^{(α,β)} dμ.
double jacobi_coefficient(const PanelFunction& f, const FamilySpec& family, int n,
                          const Tolerance& tol = {});

/// c_n(f) = ∫_0^∞ f ℒ_n^α dx.
double laguerre_fn_coefficient(const PanelFunction& f, double alpha, int n,
                               const Tolerance& tol = {});

/// c_0(f), ..., c_{n_max}(f) in one pass per node.
Eigen::VectorXd coefficient_vector(const PanelFunction& f, const FamilySpec& family, int n_max,
                                   const Tolerance& tol = {});

}  // namespace ortholab

#endif  // ORTHOLAB_QUADRATURE_HPP_
