#include "ortholab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "ortholab/errors.hpp"
#include "ortholab/orthopoly.hpp"

namespace ortholab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Composite Gauss–Legendre on [a, b] with uniform subpanels, doubled until stable.
double integrate_interval(const std::function<double(double)>& f, double a, double b, double phase,
                          const Tolerance& tol) {
  static const QuadratureRule gl = gauss_rule(JacobiMeasure{0.0, 0.0}, 20);
  const int base = std::max(1, static_cast<int>(std::ceil(phase / 10.0)));
  auto estimate = [&](int m) {
    const double h = (b - a) / m;
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      const double mid = a + (j + 0.5) * h;
      double part = 0.0;
      for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) part += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
      s += 0.5 * h * part;
    }
    return s;
  };
  double prev = estimate(base);
  for (int level = 1; level <= tol.max_doublings; ++level) {
    const double cur = estimate(base << level);
    if (std::abs(cur - prev) <= tol.rel * std::abs(cur) + tol.abs) return cur;
    prev = cur;
    if (level == tol.max_doublings) throw NumericalFailure("interval quadrature not converged", cur, prev);
  }
  return prev;
}

// Breakpoints for |φ|^q: zeros of φ carry exponent q.
std::vector<Segment> zero_segments(const std::vector<double>& zeros, double lo, double hi, double q,
                                   double lo_exp, double hi_exp) {
  std::vector<Segment> segs;
  double prev = lo;
  double prev_exp = lo_exp;
  for (double z : zeros) {
    if (!(z > prev && z < hi)) continue;
    segs.push_back({prev, z, prev_exp, q});
    prev = z;
    prev_exp = q;
  }
  segs.push_back({prev, hi, prev_exp, hi_exp});
  return segs;
}

}  // namespace

double IntervalSet::measure() const {
  double m = 0.0;
  for (const Interval& iv : intervals) m += iv.length();
  return m;
}

void IntervalSet::validate() const {
  if (intervals.empty()) throw std::domain_error("interval set is empty");
  std::vector<Interval> sorted = intervals;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].hi > sorted[i].lo) || !std::isfinite(sorted[i].lo) || !std::isfinite(sorted[i].hi)) {
      throw std::domain_error(fmt::format("interval [{}, {}] is empty or unbounded", sorted[i].lo, sorted[i].hi));
    }
    if (i > 0 && sorted[i].lo <= sorted[i - 1].hi) throw std::domain_error("intervals overlap");
  }
}

std::complex<double> chi_hat(const IntervalSet& E, double xi) {
  E.validate();
  if (xi == 0.0) return {E.measure(), 0.0};
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> s = 0.0;
  for (const Interval& iv : E.intervals) s += std::exp(-i * xi * iv.lo) - std::exp(-i * xi * iv.hi);
  return s / (i * xi);
}

Eigen::VectorXd cantor_lebesgue_estimate(const std::function<double(int, double)>& F, const IntervalSet& E,
                                         const std::vector<int>& n_grid, const Tolerance& tol) {
  E.validate();
  const double measure = E.measure();
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_grid.size()));
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const int n = n_grid[k];
    double I = 0.0;
    for (const Interval& iv : E.intervals) {
      auto sq = [&](double t) {
        const double v = F(n, t);
        return v * v;
      };
      I += integrate_interval(sq, iv.lo, iv.hi, 2.0 * (n + 1) * iv.length(), tol);
    }
    out[static_cast<Eigen::Index>(k)] = std::sqrt(2.0 * I / measure);
  }
  return out;
}

double jacobi_weighted_norm(const FamilySpec& family, int n, double q, double r, const Tolerance& tol) {
  if (!family.is_jacobi()) throw std::invalid_argument("jacobi_weighted_norm needs a Jacobi family");
  family.require_theorem_range();
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::domain_error("jacobi_weighted_norm requires 1 <= q < inf");
  if (!(r > -1.0 / q)) throw std::domain_error("jacobi_weighted_norm requires r > -1/q");
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  const JacobiRecurrence<double> rec(family.alpha, family.beta, n);
  auto P = [&](double x) {
    double v = 0.0;
    rec.sweep(x, [&](int m, double p) {
      if (m == n) v = p;
    });
    return v;
  };
  const std::vector<double> zeros = n > 0 ? find_zeros(P, 0.0, 1.0, true, n) : std::vector<double>{};
  const double lo_exp = (n > 0 && P(0.0) == 0.0) ? q : 0.0;
  const std::vector<Segment> segs = zero_segments(zeros, 0.0, 1.0, q, lo_exp, r * q);
  auto integrand = [&](double x) { return std::pow(std::abs(P(x)), q) * std::pow(1.0 - x, r * q); };
  const int resolve = static_cast<int>(std::ceil(q)) * n;
  const double I = integrate_adaptive(JacobiMeasure{0.0, 0.0}, segs, resolve, integrand, tol);
  return std::pow(I, 1.0 / q);
}

double laguerre_fn_norm(double alpha, int n, double q, const Tolerance& tol) {
  if (!(alpha > -0.5)) throw std::domain_error("Laguerre norm laws require alpha > -1/2");
  if (!(q >= 1.0)) throw std::domain_error("laguerre_fn_norm requires q >= 1");
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  const LaguerreFunctionRecurrence<double> rec(alpha, n);
  auto L = [&](double x) {
    double v = 0.0;
    rec.sweep(x, [&](int m, double p) {
      if (m == n) v = p;
    });
    return v;
  };
  double x_cut = laguerre_cutoff(alpha, n);
  if (std::isinf(q)) {
    // Scan uniform in √x at 32 points per local half-oscillation, then refine
    // around the largest sample by golden-section search.
    const double sc = std::sqrt(x_cut);
    const int steps = static_cast<int>(std::ceil(sc * 32.0 * std::sqrt(n + 1.0) / std::numbers::pi)) + 64;
    double best = 0.0, best_s = 0.0;
    for (int j = 1; j <= steps; ++j) {
      const double s = sc * j / steps;
      const double v = std::abs(L(s * s));
      if (v > best) {
        best = v;
        best_s = s;
      }
    }
    double a = std::max(0.0, best_s - sc / steps), b = std::min(sc, best_s + sc / steps);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      if (std::abs(L(c * c)) > std::abs(L(d * d))) b = d;
      else a = c;
    }
    return std::max(best, std::abs(L(0.25 * (a + b) * (a + b))));
  }
  for (int attempt = 0;; ++attempt) {
    const std::vector<double> zeros = n > 0 ? find_zeros(L, 0.0, std::min(x_cut, laguerre_cutoff(alpha, n)), false, n)
                                            : std::vector<double>{};
    const std::vector<Segment> segs = zero_segments(zeros, 0.0, x_cut, q, 0.5 * alpha * q, 0.0);
    auto integrand = [&](double x) { return std::pow(std::abs(L(x)), q); };
    const double I = integrate_adaptive(HalfLineLebesgue{}, segs, static_cast<int>(std::ceil(q)) * n, integrand, tol);
    // Past the turning point |ℒ_n| decays at least like exp(-(1/2 - (n+α/2)/x) x).
    const double rate = q * (0.5 - (n + 0.5 * alpha) / x_cut);
    const double tail = rate > 0.0 ? std::pow(std::abs(L(x_cut)), q) / rate : std::numeric_limits<double>::infinity();
    if (tail <= tol.rel * I) return std::pow(I, 1.0 / q);
    if (attempt == 8) {
      throw NumericalFailure(fmt::format("Laguerre norm tail bound {:.3g} exceeds tolerance", tail), I, tail);
    }
    x_cut *= 2.0;
  }
}

CriticalIndices critical_indices(double alpha) {
  if (!(alpha > -0.5)) throw std::domain_error("critical indices require alpha > -1/2");
  return {4.0 * (alpha + 1.0) / (2.0 * alpha + 3.0), 4.0 * (alpha + 1.0) / (2.0 * alpha + 1.0)};
}

double jacobi_delta_exponent(double alpha, double p) {
  return (2.0 * alpha + 2.0) / p - (2.0 * alpha + 3.0) / 2.0;
}

double jacobi_delta_bound(double alpha, double p) {
  const CriticalIndices ci = critical_indices(alpha);
  if (!(p >= 1.0)) throw std::domain_error("jacobi_delta_bound requires p >= 1");
  if (p == ci.p_c) return 0.0;
  if (p > ci.p_c) {
    throw std::domain_error(fmt::format("p = {} is not below the critical index {}", p, ci.p_c));
  }
  return jacobi_delta_exponent(alpha, p);
}

double laguerre_delta_bound(double p) {
  if (!(p > 4.0)) throw std::domain_error("laguerre_delta_bound requires p > 4");
  return 0.25 - 1.0 / p;
}

GrowthFit fit_growth_exponent(const std::vector<double>& n_grid, const std::vector<double>& values) {
  if (n_grid.size() != values.size()) throw std::invalid_argument("grid and values differ in length");
  if (n_grid.size() < 8) throw std::invalid_argument("growth fit needs at least 8 grid points");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(values[i] > 0.0) || !(n_grid[i] > 0.0)) throw std::domain_error("growth fit needs positive data");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
  const std::size_t start = n_grid.size() / 2;
  const Eigen::Index m = static_cast<Eigen::Index>(n_grid.size() - start);
  Eigen::VectorXd X(m), Y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    X[i] = std::log(n_grid[start + i]);
    Y[i] = std::log(values[start + i]);
  }
  const double xm = X.mean(), ym = Y.mean();
  const Eigen::VectorXd dx = X.array() - xm, dy = Y.array() - ym;
  const double sxx = dx.squaredNorm();
  if (sxx == 0.0) throw std::invalid_argument("degenerate grid");
  const double slope = dx.dot(dy) / sxx;
  const double intercept = ym - slope * xm;
  const double ssr = (dy - slope * dx).squaredNorm();
  const double se = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  return {slope, intercept, 2.0 * se};
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Flat: return "flat";
    case Regime::FlatLog: return "flat-log";
    case Regime::Growth: return "growth";
    case Regime::Unpredicted: return "unpredicted";
  }
  return "unknown";
}

RegimePrediction predicted_jacobi_regime(double alpha, double q, double r) {
  const double threshold = alpha / 2.0 + 0.25 - 1.0 / q;
  const double eps = 1e-12 * std::max(1.0, std::abs(threshold));
  if (std::abs(r - threshold) <= eps) return {Regime::FlatLog, -0.5, threshold};
  if (r > threshold) return {Regime::Flat, -0.5, threshold};
  return {Regime::Growth, alpha - 2.0 * r - 2.0 / q, threshold};
}

RegimePrediction predicted_laguerre_regime(double q) {
  if (!(q >= 1.0)) throw std::domain_error("Laguerre norm laws need q >= 1");
  if (q < 2.0) return {Regime::Flat, 1.0 / q - 0.5, kNaN};
  if (q == 4.0) return {Regime::FlatLog, -0.25, kNaN};
  if (q > 4.0) return {Regime::Flat, -1.0 / q, kNaN};
  return {Regime::Unpredicted, kNaN, kNaN};
}

SlopeWindow slope_window(const FamilySpec& family, const RegimePrediction& p) {
  switch (p.regime) {
    case Regime::Unpredicted: return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    case Regime::FlatLog:
      // A log factor reads as a small upward bias in a short regression.
      return family.is_jacobi() ? SlopeWindow{-0.5, -0.3} : SlopeWindow{-0.30, -0.18};
    default: return {p.exponent - 0.07, p.exponent + 0.07};
  }
}

std::vector<int> geometric_grid(int n_min, int n_max, int points) {
  if (n_min < 1 || n_max < n_min || points < 1) throw std::domain_error("invalid geometric grid");
  std::vector<int> out;
  const double ratio = points > 1 ? std::pow(static_cast<double>(n_max) / n_min, 1.0 / (points - 1)) : 1.0;
  for (int j = 0; j < points; ++j) {
    const int v = j == points - 1 ? n_max : static_cast<int>(std::lround(n_min * std::pow(ratio, j)));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

NormScan jacobi_norm_scan(const FamilySpec& family, double q, double r, const std::vector<int>& n_grid) {
  NormScan scan{family, q, r, n_grid, {}, {}, predicted_jacobi_regime(family.alpha, q, r)};
  std::vector<double> ns;
  for (int n : n_grid) {
    scan.values.push_back(jacobi_weighted_norm(family, n, q, r));
    ns.push_back(n);
  }
  if (n_grid.size() >= 8) scan.fit = fit_growth_exponent(ns, scan.values);
  return scan;
}

NormScan laguerre_norm_scan(double alpha, double q, const std::vector<int>& n_grid) {
  NormScan scan{FamilySpec::laguerre(alpha), q, 0.0, n_grid, {}, {}, predicted_laguerre_regime(q)};
  std::vector<double> ns;
  for (int n : n_grid) {
    scan.values.push_back(laguerre_fn_norm(alpha, n, q));
    ns.push_back(n);
  }
  if (n_grid.size() >= 8) scan.fit = fit_growth_exponent(ns, scan.values);
  return scan;
}

double jacobi_residual_envelope(const FamilySpec& family, int n, double theta) {
  const int period = static_cast<int>(std::ceil(2.0 * std::numbers::pi / theta));
  const Eigen::VectorXd p = jacobi_eval_all(family, n + period, std::cos(theta));
  double env = 0.0;
  for (int m = n; m <= n + period; ++m) {
    env = std::max(env, std::abs(p[m] - jacobi_asymptotic(family, m, theta)));
  }
  return env;
}

double laguerre_residual_envelope(double alpha, int n, double x) {
  const double span = 2.0 * std::numbers::pi * std::sqrt(n / x);
  const int last = n + static_cast<int>(std::ceil(span));
  const int stride = std::max(1, static_cast<int>(std::sqrt(n / x) / 4.0));
  const Eigen::VectorXd L = laguerre_eval_all(alpha, last, x);
  double env = 0.0;
  for (int m = n; m <= last; m += stride) {
    env = std::max(env, std::abs(L[m] - laguerre_asymptotic(alpha, m, x)) / std::pow(m, alpha / 2.0));
  }
  return env;
}

}  // namespace ortholab
