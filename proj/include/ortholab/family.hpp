#ifndef ORTHOLAB_FAMILY_HPP_
#define ORTHOLAB_FAMILY_HPP_

#include <stdexcept>
#include <string>

namespace ortholab {

enum class FamilyKind { Jacobi, Laguerre };

/// Which orthogonal system an expansion is taken in.
///
/// Jacobi(α, β): polynomials P_n^{(α,β)} on [-1, 1] with dμ = (1-x)^α (1+x)^β dx.
/// Laguerre(α): the normalized functions ℒ_n^α on [0, ∞) under Lebesgue measure.
///
/// The constructors accept any parameters for which evaluation is defined
/// (α, β > -1). Operations tied to the divergence theorems call
/// require_theorem_range(), which enforces the narrower admissible range.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Jacobi;
  double alpha = 0.0;
  double beta = 0.0;

  static FamilySpec jacobi(double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0)) {
      throw std::domain_error("Jacobi parameters must satisfy alpha, beta > -1");
    }
    return {FamilyKind::Jacobi, alpha, beta};
  }

  static FamilySpec laguerre(double alpha) {
    if (!(alpha > -1.0)) {
      throw std::domain_error("Laguerre parameter must satisfy alpha > -1");
    }
    return {FamilyKind::Laguerre, alpha, 0.0};
  }

  bool is_jacobi() const { return kind == FamilyKind::Jacobi; }
  bool is_laguerre() const { return kind == FamilyKind::Laguerre; }

  /// Jacobi: α ≥ β ≥ -1/2 with α > -1/2. Laguerre: α > -1/2.
  void require_theorem_range() const {
    if (is_jacobi()) {
      if (!(alpha >= beta && beta >= -0.5 && alpha > -0.5)) {
        throw std::domain_error(
            "Jacobi theorem range requires alpha >= beta >= -1/2 and alpha > -1/2");
      }
    } else if (!(alpha > -0.5)) {
      throw std::domain_error("Laguerre norm range requires alpha > -1/2");
    }
  }

  std::string name() const { return is_jacobi() ? "jacobi" : "laguerre"; }

  bool operator==(const FamilySpec&) const = default;
};

}  // namespace ortholab

#endif  // ORTHOLAB_FAMILY_HPP_
