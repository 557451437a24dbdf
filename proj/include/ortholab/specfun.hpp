#ifndef ORTHOLAB_SPECFUN_HPP_
#define ORTHOLAB_SPECFUN_HPP_

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ortholab {

/// Order of a Cesàro mean. Construction enforces delta > -1.
class CesaroOrder {
 public:
  explicit CesaroOrder(double delta) : delta_(delta) {
    if (!(delta > -1.0)) {
      throw std::domain_error("Cesaro order must exceed -1, got " + std::to_string(delta));
    }
  }
  double value() const { return delta_; }

 private:
  double delta_;
};

namespace detail {

// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,   -1259.1392167224028,
    771.32342877765313,      -176.61502916214059, 12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Partial-fraction sum of the Lanczos series evaluated at z = x - 1.
template <std::floating_point Scalar>
Scalar lanczos_series(Scalar x) {
  const Scalar z = x - Scalar(1);
  Scalar sum = Scalar(kLanczosCoefficients[0]);
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    sum += Scalar(kLanczosCoefficients[i]) / (z + Scalar(i));
  }
  return sum;
}

}  // namespace detail

/// ln Γ(x) for x > 0.
template <std::floating_point Scalar>
Scalar log_gamma(Scalar x) {
  if (!(x > Scalar(0))) {
    throw std::domain_error("log_gamma requires x > 0");
  }
  if (x == Scalar(1) || x == Scalar(2)) return Scalar(0);
  const Scalar t = x + Scalar(detail::kLanczosG) - Scalar(0.5);
  return Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) +
         (x - Scalar(0.5)) * std::log(t) - t + std::log(detail::lanczos_series(x));
}

/// ln Γ(x + d) - ln Γ(x), evaluated without forming either log-gamma value, so
/// the difference keeps full relative precision when x is large.
template <std::floating_point Scalar>
Scalar log_gamma_ratio(Scalar x, Scalar d) {
  if (!(x > Scalar(0)) || !(x + d > Scalar(0))) {
    throw std::domain_error("log_gamma_ratio requires x > 0 and x + d > 0");
  }
  if (d == Scalar(0)) return Scalar(0);
  const Scalar t = x + Scalar(detail::kLanczosG) - Scalar(0.5);
  return (x - Scalar(0.5)) * std::log1p(d / t) + d * std::log(t + d) - d +
         std::log(detail::lanczos_series(x + d) / detail::lanczos_series(x));
}

/// ln A_n^δ where A_n^δ = binom(n + δ, n).
template <std::floating_point Scalar>
Scalar log_cesaro_A(long n, Scalar delta) {
  if (!(delta > Scalar(-1))) {
    throw std::domain_error("cesaro_A requires delta > -1");
  }
  if (n < 0) throw std::out_of_range("cesaro_A requires n >= 0");
  if (n == 0 || delta == Scalar(0)) return Scalar(0);
  return log_gamma_ratio(Scalar(n + 1), delta) - log_gamma(delta + Scalar(1));
}

/// A_n^δ = binom(n + δ, n) = Γ(n + δ + 1) / (Γ(δ + 1) Γ(n + 1)).
template <std::floating_point Scalar>
Scalar cesaro_A(long n, Scalar delta) {
  if (n == 0 || delta == Scalar(0)) {
    log_cesaro_A(n, delta);  // validates arguments
    return Scalar(1);
  }
  return std::exp(log_cesaro_A(n, delta));
}

/// Cesàro weight A_{N-n}^δ / A_N^δ for 0 <= n <= N.
template <std::floating_point Scalar>
Scalar cesaro_weight(long N, long n, Scalar delta) {
  if (n < 0 || n > N) {
    throw std::out_of_range("cesaro_weight requires 0 <= n <= N");
  }
  if (!(delta > Scalar(-1))) {
    throw std::domain_error("cesaro_weight requires delta > -1");
  }
  if (delta == Scalar(0) || n == 0) return Scalar(1);
  // The ln Γ(δ + 1) terms cancel.
  return std::exp(log_gamma_ratio(Scalar(N - n + 1), delta) -
                  log_gamma_ratio(Scalar(N + 1), delta));
}

}  // namespace ortholab

#endif  // ORTHOLAB_SPECFUN_HPP_
