#ifndef ORTHOLAB_ORTHOPOLY_HPP_
#define ORTHOLAB_ORTHOPOLY_HPP_

#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <variant>

#include <Eigen/Core>

#include "ortholab/family.hpp"
#include "ortholab/specfun.hpp"

namespace ortholab {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Main term of an oscillatory asymptotic formula,
///   amplitude * cos(frequency * argument + phase_offset),
/// with remainder O(n^error_order).
template <std::floating_point Scalar = double>
struct AsymptoticMainTerm {
  Scalar amplitude;
  Scalar frequency;
  Scalar phase_offset;
  Scalar error_order;
  Scalar argument;

  Scalar value() const { return amplitude * std::cos(frequency * argument + phase_offset); }
};

// ---------------------------------------------------------------------------
// Jacobi polynomials (Szegő normalization)

/// Three-term recurrence P_n = (A_n x + B_n) P_{n-1} - C_n P_{n-2}, with the
/// coefficients tabulated once so repeated sweeps over many nodes stay cheap.
template <std::floating_point Scalar = double>
class JacobiRecurrence {
 public:
  JacobiRecurrence(Scalar alpha, Scalar beta, int n_max)
      : alpha_(alpha), beta_(beta), a_(std::max(n_max + 1, 2)), b_(std::max(n_max + 1, 2)),
        c_(std::max(n_max + 1, 2)) {
    if (n_max < 0) throw std::out_of_range("JacobiRecurrence requires n_max >= 0");
    const Scalar ab = alpha + beta;
    a_[1] = (ab + Scalar(2)) / Scalar(2);
    b_[1] = (alpha + Scalar(1)) - (ab + Scalar(2)) / Scalar(2);
    c_[1] = Scalar(0);
    for (int n = 2; n <= n_max; ++n) {
      const Scalar s = Scalar(2 * n) + ab;
      const Scalar denom = Scalar(2 * n) * (Scalar(n) + ab) * (s - Scalar(2));
      a_[n] = (s - Scalar(1)) * s * (s - Scalar(2)) / denom;
      b_[n] = (s - Scalar(1)) * (alpha * alpha - beta * beta) / denom;
      c_[n] = Scalar(2) * (Scalar(n) + alpha - Scalar(1)) * (Scalar(n) + beta - Scalar(1)) * s / denom;
    }
    n_max_ = n_max;
  }

  int n_max() const { return n_max_; }
  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }

  /// Calls visit(n, P_n(x)) for n = 0..n_max in order.
  template <class Visit>
  void sweep(Scalar x, Visit&& visit) const {
    Scalar p_prev = Scalar(1);
    visit(0, p_prev);
    if (n_max_ == 0) return;
    Scalar p = a_[1] * x + b_[1];
    visit(1, p);
    for (int n = 2; n <= n_max_; ++n) {
      const Scalar next = (a_[n] * x + b_[n]) * p - c_[n] * p_prev;
      p_prev = p;
      p = next;
      visit(n, p);
    }
  }

 private:
  Scalar alpha_, beta_;
  int n_max_ = 0;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> a_, b_, c_;
};

namespace detail {
inline void require_jacobi(const FamilySpec& family) {
  if (!family.is_jacobi()) throw std::invalid_argument("expected a Jacobi family");
}
template <std::floating_point Scalar>
void require_unit_interval(Scalar x) {
  if (!(x >= Scalar(-1) && x <= Scalar(1))) {
    throw std::domain_error("Jacobi evaluation requires x in [-1, 1]");
  }
}
}  // namespace detail

/// P_0(x), ..., P_{n_max}(x) in one recurrence pass.
template <std::floating_point Scalar = double>
VectorX<Scalar> jacobi_eval_all(const FamilySpec& family, int n_max, Scalar x) {
  detail::require_jacobi(family);
  detail::require_unit_interval(x);
  VectorX<Scalar> out(n_max + 1);
  JacobiRecurrence<Scalar>(Scalar(family.alpha), Scalar(family.beta), n_max)
      .sweep(x, [&](int n, Scalar v) { out[n] = v; });
  return out;
}

template <std::floating_point Scalar = double>
Scalar jacobi_eval(const FamilySpec& family, int n, Scalar x) {
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  return jacobi_eval_all(family, n, x)[n];
}

/// Squared L²(μ) norm h_n^{(α,β)} of P_n^{(α,β)}.
template <std::floating_point Scalar = double>
Scalar jacobi_h(const FamilySpec& family, int n) {
  detail::require_jacobi(family);
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  const Scalar a = Scalar(family.alpha), b = Scalar(family.beta);
  const Scalar ln2 = std::numbers::ln2_v<Scalar>;
  if (n == 0) {
    // Limit form, valid also when α + β + 1 = 0.
    return std::exp((a + b + Scalar(1)) * ln2 + log_gamma(a + Scalar(1)) +
                    log_gamma(b + Scalar(1)) - log_gamma(a + b + Scalar(2)));
  }
  const Scalar m = Scalar(n);
  return std::exp((a + b + Scalar(1)) * ln2 - std::log(Scalar(2) * m + a + b + Scalar(1)) +
                  log_gamma_ratio(m + Scalar(1), a) - log_gamma_ratio(m + b + Scalar(1), a));
}

/// Main term n^{-1/2} k(θ) cos(M_n θ + γ) of P_n^{(α,β)}(cos θ).
template <std::floating_point Scalar = double>
AsymptoticMainTerm<Scalar> jacobi_main_term(const FamilySpec& family, int n, Scalar theta) {
  detail::require_jacobi(family);
  if (n < 1) throw std::out_of_range("asymptotic main term requires n >= 1");
  if (!(theta > Scalar(0) && theta < std::numbers::pi_v<Scalar>)) {
    throw std::domain_error("asymptotic main term requires 0 < theta < pi");
  }
  const Scalar a = Scalar(family.alpha), b = Scalar(family.beta);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar k = std::pow(std::sin(theta / 2), -a - Scalar(0.5)) *
                   std::pow(std::cos(theta / 2), -b - Scalar(0.5)) / std::sqrt(pi);
  return {k / std::sqrt(Scalar(n)), Scalar(n) + (a + b + Scalar(1)) / Scalar(2),
          -(a + Scalar(0.5)) * pi / Scalar(2), Scalar(-1.5), theta};
}

template <std::floating_point Scalar = double>
Scalar jacobi_asymptotic(const FamilySpec& family, int n, Scalar theta) {
  return jacobi_main_term(family, n, theta).value();
}

// ---------------------------------------------------------------------------
// Laguerre polynomials and normalized Laguerre functions

template <std::floating_point Scalar = double>
VectorX<Scalar> laguerre_eval_all(Scalar alpha, int n_max, Scalar x) {
  if (!(alpha > Scalar(-1))) throw std::domain_error("Laguerre requires alpha > -1");
  if (!(x >= Scalar(0))) throw std::domain_error("Laguerre evaluation requires x >= 0");
  if (n_max < 0) throw std::out_of_range("degree must be non-negative");
  VectorX<Scalar> out(n_max + 1);
  out[0] = Scalar(1);
  if (n_max >= 1) out[1] = Scalar(1) + alpha - x;
  for (int n = 1; n < n_max; ++n) {
    out[n + 1] = ((Scalar(2 * n + 1) + alpha - x) * out[n] - (Scalar(n) + alpha) * out[n - 1]) /
                 Scalar(n + 1);
  }
  return out;
}

template <std::floating_point Scalar = double>
Scalar laguerre_eval(Scalar alpha, int n, Scalar x) {
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  return laguerre_eval_all(alpha, n, x)[n];
}

/// h_n^{(α)} = Γ(α+1) binom(n+α, n) = Γ(n+α+1)/Γ(n+1).
template <std::floating_point Scalar = double>
Scalar laguerre_h(Scalar alpha, int n) {
  if (!(alpha > Scalar(-1))) throw std::domain_error("Laguerre requires alpha > -1");
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  if (n == 0) return std::exp(log_gamma(alpha + Scalar(1)));
  return std::exp(log_gamma_ratio(Scalar(n + 1), alpha));
}

/// Recurrence for the orthonormal functions
///   ℒ_n^α(x) = sqrt(Γ(n+1)/Γ(n+α+1)) e^{-x/2} x^{α/2} L_n^{(α)}(x).
/// The normalized polynomial part is carried with a separate binary exponent
/// and the prefactor e^{-x/2} x^{α/2} stays in log form until output, so no
/// intermediate overflows or underflows for large n or x.
template <std::floating_point Scalar = double>
class LaguerreFunctionRecurrence {
 public:
  LaguerreFunctionRecurrence(Scalar alpha, int n_max)
      : alpha_(alpha), diag_(n_max + 1), lower_(n_max + 1), inv_upper_(n_max + 1) {
    if (!(alpha > Scalar(-1))) throw std::domain_error("Laguerre requires alpha > -1");
    if (n_max < 0) throw std::out_of_range("degree must be non-negative");
    n_max_ = n_max;
    for (int n = 0; n <= n_max; ++n) {
      const Scalar m = Scalar(n);
      diag_[n] = Scalar(2) * m + Scalar(1) + alpha;
      lower_[n] = std::sqrt(m * (m + alpha));
      inv_upper_[n] = Scalar(1) / std::sqrt((m + Scalar(1)) * (m + Scalar(1) + alpha));
    }
    log_norm0_ = -Scalar(0.5) * log_gamma(alpha + Scalar(1));
  }

  int n_max() const { return n_max_; }
  Scalar alpha() const { return alpha_; }

  /// Calls visit(n, ℒ_n^α(x)) for n = 0..n_max in order. Values whose magnitude
  /// is below the smallest normal double flush to zero.
  template <class Visit>
  void sweep(Scalar x, Visit&& visit) const {
    if (!(x >= Scalar(0))) throw std::domain_error("Laguerre function requires x >= 0");
    if (x == Scalar(0) && alpha_ < Scalar(0)) {
      throw std::domain_error("Laguerre function with alpha < 0 is singular at x = 0");
    }
    Scalar log_scale = -x / Scalar(2) + log_norm0_;
    if (alpha_ != Scalar(0)) log_scale += alpha_ / Scalar(2) * std::log(x);
    Scalar factor = std::exp(log_scale);
    Scalar prev = Scalar(0);
    Scalar cur = Scalar(1);
    visit(0, factor * cur);
    constexpr Scalar kBig = Scalar(0x1p300);
    constexpr Scalar kLogBig = Scalar(300) * std::numbers::ln2_v<Scalar>;
    for (int n = 0; n < n_max_; ++n) {
      const Scalar next = ((diag_[n] - x) * cur - lower_[n] * prev) * inv_upper_[n];
      prev = cur;
      cur = next;
      if (std::abs(cur) > kBig) {
        cur /= kBig;
        prev /= kBig;
        log_scale += kLogBig;
        factor = std::exp(log_scale);
      }
      visit(n + 1, factor * cur);
    }
  }

 private:
  Scalar alpha_;
  int n_max_ = 0;
  Scalar log_norm0_ = 0;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> diag_, lower_, inv_upper_;
};

template <std::floating_point Scalar = double>
VectorX<Scalar> laguerre_fn_eval_all(Scalar alpha, int n_max, Scalar x) {
  VectorX<Scalar> out(n_max + 1);
  LaguerreFunctionRecurrence<Scalar>(alpha, n_max).sweep(x, [&](int n, Scalar v) { out[n] = v; });
  return out;
}

template <std::floating_point Scalar = double>
Scalar laguerre_fn_eval(Scalar alpha, int n, Scalar x) {
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  return laguerre_fn_eval_all(alpha, n, x)[n];
}

/// Fejér main term of L_n^{(α)}(x):
///   π^{-1/2} e^{x/2} x^{-α/2-1/4} n^{α/2-1/4} cos(2 sqrt(n x) - απ/2 - π/4),
/// remainder O(n^{α/2-3/4}) uniformly on compact subsets of (0, ∞).
template <std::floating_point Scalar = double>
AsymptoticMainTerm<Scalar> laguerre_main_term(Scalar alpha, int n, Scalar x) {
  if (!(x > Scalar(0))) throw std::domain_error("Fejer formula requires x > 0");
  if (n < 1) throw std::out_of_range("asymptotic main term requires n >= 1");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar amplitude = std::exp(x / 2) * std::pow(x, -alpha / 2 - Scalar(0.25)) *
                           std::pow(Scalar(n), alpha / 2 - Scalar(0.25)) / std::sqrt(pi);
  return {amplitude, Scalar(2) * std::sqrt(Scalar(n)), -alpha * pi / 2 - pi / 4,
          alpha / 2 - Scalar(0.75), std::sqrt(x)};
}

template <std::floating_point Scalar = double>
Scalar laguerre_asymptotic(Scalar alpha, int n, Scalar x) {
  return laguerre_main_term(alpha, n, x).value();
}

// ---------------------------------------------------------------------------
// Family-generic access: φ_n is P_n^{(α,β)} for Jacobi and ℒ_n^α for Laguerre.

template <std::floating_point Scalar = double>
class FamilyRecurrence {
 public:
  FamilyRecurrence(const FamilySpec& family, int n_max)
      : impl_(family.is_jacobi()
                  ? Impl(JacobiRecurrence<Scalar>(Scalar(family.alpha), Scalar(family.beta), n_max))
                  : Impl(LaguerreFunctionRecurrence<Scalar>(Scalar(family.alpha), n_max))) {}

  template <class Visit>
  void sweep(Scalar x, Visit&& visit) const {
    std::visit([&](const auto& r) { r.sweep(x, visit); }, impl_);
  }

  int n_max() const {
    return std::visit([](const auto& r) { return r.n_max(); }, impl_);
  }

 private:
  using Impl = std::variant<JacobiRecurrence<Scalar>, LaguerreFunctionRecurrence<Scalar>>;
  Impl impl_;
};

template <std::floating_point Scalar = double>
VectorX<Scalar> family_eval_all(const FamilySpec& family, int n_max, Scalar x) {
  return family.is_jacobi() ? jacobi_eval_all(family, n_max, x)
                            : laguerre_fn_eval_all(Scalar(family.alpha), n_max, x);
}

/// Normalizer h_n of φ_n: jacobi_h for Jacobi, 1 for the orthonormal Laguerre functions.
template <std::floating_point Scalar = double>
Scalar family_h(const FamilySpec& family, int n) {
  return family.is_jacobi() ? jacobi_h<Scalar>(family, n) : Scalar(1);
}

}  // namespace ortholab

#endif  // ORTHOLAB_ORTHOPOLY_HPP_
