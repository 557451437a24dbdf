#include "ortholab/summability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ortholab/orthopoly.hpp"
#include "ortholab/specfun.hpp"

namespace ortholab {

CoefficientSeries CoefficientSeries::from_coefficients(const FamilySpec& family, Eigen::VectorXd c) {
  CoefficientSeries s{family, std::move(c), Eigen::VectorXd()};
  s.h.resize(s.c.size());
  for (Eigen::Index n = 0; n < s.c.size(); ++n) s.h[n] = family_h<double>(family, static_cast<int>(n));
  s.validate();
  return s;
}

void CoefficientSeries::validate() const {
  if (c.size() == 0) throw std::invalid_argument("coefficient series is empty");
  if (c.size() != h.size()) throw std::invalid_argument("coefficient and normalizer lengths differ");
  if (!(h.array() > 0.0).all()) throw std::invalid_argument("normalizers must be positive");
}

Eigen::VectorXd CoefficientSeries::terms(double x) const {
  validate();
  Eigen::VectorXd phi = family_eval_all(family, n_max(), x);
  return c.cwiseQuotient(h).cwiseProduct(phi);
}

void SummationSpec::validate() const {
  switch (method) {
    case SummationMethod::Cesaro:
      if (!(delta > -1.0)) throw std::domain_error("Cesaro means require delta > -1");
      if (order < 0.0 || order != std::floor(order)) {
        throw std::domain_error("Cesaro index N must be a non-negative integer");
      }
      break;
    case SummationMethod::Riesz:
      if (!(delta >= 0.0)) throw std::domain_error("Riesz means require delta >= 0");
      if (!(order > 0.0)) throw std::domain_error("Riesz means require r > 0");
      break;
    case SummationMethod::PartialSum:
      if (delta != 0.0) throw std::domain_error("partial sums have delta = 0");
      if (!(order > 0.0)) throw std::domain_error("partial sums require r > 0");
      break;
  }
}

namespace {

void require_index(const CoefficientSeries& s, int N) {
  if (N > s.n_max()) {
    throw std::out_of_range(fmt::format("index {} exceeds the series length {}", N, s.n_max()));
  }
}

// Number of indices n with 0 ≤ n < r.
int riesz_count(double r) { return r <= 0.0 ? 0 : static_cast<int>(std::ceil(r)); }

double riesz_sum(const Eigen::VectorXd& terms, double r, double delta) {
  const int count = riesz_count(r);
  double sum = 0.0;
  for (int n = 0; n < count; ++n) {
    const double factor = delta == 0.0 ? 1.0 : std::pow(1.0 - n / r, delta);
    sum += factor * terms[n];
  }
  return sum;
}

}  // namespace

double cesaro_mean(const CoefficientSeries& s, int N, double delta, double x) {
  CesaroOrder order(delta);
  if (N < 0) throw std::out_of_range("Cesaro index must be non-negative");
  require_index(s, N);
  const Eigen::VectorXd t = s.terms(x);
  double sum = 0.0;
  for (int n = 0; n <= N; ++n) sum += cesaro_weight<double>(N, n, order.value()) * t[n];
  return sum;
}

double riesz_mean(const CoefficientSeries& s, double r, double delta, double x) {
  SummationSpec{SummationMethod::Riesz, r, delta}.validate();
  if (riesz_count(r) > s.n_max() + 1) {
    throw std::out_of_range(fmt::format("r = {} needs coefficients beyond {}", r, s.n_max()));
  }
  return riesz_sum(s.terms(x), r, delta);
}

double partial_sum(const CoefficientSeries& s, double r, double x) { return riesz_mean(s, r, 0.0, x); }

double evaluate(const CoefficientSeries& s, const SummationSpec& spec, double x) {
  spec.validate();
  if (spec.method == SummationMethod::Cesaro) {
    return cesaro_mean(s, static_cast<int>(spec.order), spec.delta, x);
  }
  return riesz_mean(s, spec.order, spec.delta, x);
}

Eigen::VectorXd cesaro_means(const Eigen::VectorXd& terms, double delta, int N_max) {
  CesaroOrder order(delta);
  if (N_max < 0 || N_max >= terms.size()) throw std::out_of_range("N_max outside the term vector");
  Eigen::VectorXd out(N_max + 1);
  if (delta == 0.0) {
    double sum = 0.0;
    for (int N = 0; N <= N_max; ++N) out[N] = (sum += terms[N]);
    return out;
  }
  Eigen::VectorXd logA(N_max + 1);
  for (int m = 0; m <= N_max; ++m) logA[m] = log_cesaro_A<double>(m, order.value());
  const double* t = terms.data();
  if (logA.cwiseAbs().maxCoeff() < 600.0) {
    const Eigen::VectorXd A = logA.array().exp().matrix();
    const double* a = A.data();
    for (int N = 0; N <= N_max; ++N) {
      double sum = 0.0;
      for (int n = 0; n <= N; ++n) sum += a[N - n] * t[n];
      out[N] = sum / a[N];
    }
  } else {
    for (int N = 0; N <= N_max; ++N) {
      double sum = 0.0;
      for (int n = 0; n <= N; ++n) sum += std::exp(logA[N - n] - logA[N]) * t[n];
      out[N] = sum;
    }
  }
  return out;
}

Eigen::VectorXd riesz_means(const Eigen::VectorXd& terms, double delta, const std::vector<double>& r_grid) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(r_grid.size()));
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    SummationSpec{SummationMethod::Riesz, r_grid[i], delta}.validate();
    if (riesz_count(r_grid[i]) > terms.size()) throw std::out_of_range("r beyond the term vector");
    out[static_cast<Eigen::Index>(i)] = riesz_sum(terms, r_grid[i], delta);
  }
  return out;
}

TermGrowthReport term_growth_check(const CoefficientSeries& s, double delta, double x, int N_max) {
  CesaroOrder order(delta);
  if (N_max < 1) throw std::out_of_range("term_growth_check needs N_max >= 1");
  require_index(s, N_max);
  const Eigen::VectorXd t = s.terms(x);
  const Eigen::VectorXd sigma = cesaro_means(t, order.value(), N_max);
  TermGrowthReport rep;
  rep.ratios = Eigen::VectorXd::Zero(N_max + 1);
  double running = std::abs(sigma[0]);
  bool any_defined = false;
  for (int n = 1; n <= N_max; ++n) {
    running = std::max(running, std::abs(sigma[n]));
    const double num = std::abs(t[n]);
    if (running == 0.0) {
      if (num != 0.0) rep.degenerate = true;
      continue;
    }
    any_defined = true;
    const double ratio = num / (std::pow(static_cast<double>(n), delta) * running);
    rep.ratios[n] = ratio;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax_n = n;
    }
  }
  if (!any_defined) rep.degenerate = true;
  return rep;
}

PartialSumControlReport partial_sum_control_check(const CoefficientSeries& s, double delta, double x,
                                                  double r_max) {
  if (!(delta > 0.0)) throw std::domain_error("partial_sum_control_check requires delta > 0");
  if (!(r_max >= 0.5)) throw std::domain_error("partial_sum_control_check requires r_max >= 1/2");
  if (riesz_count(r_max + 1.0) > s.n_max() + 1) {
    throw std::out_of_range(fmt::format("r_max = {} needs coefficients beyond {}", r_max, s.n_max()));
  }
  const Eigen::VectorXd t = s.terms(x);
  PartialSumControlReport rep;
  rep.limit_proxy = riesz_sum(t, r_max, delta);
  const double c = rep.limit_proxy;

  // Running sup of |S_t^δ - c| on t = 1/4, 1/2, ... .
  const int steps = static_cast<int>(std::floor(4.0 * (r_max + 1.0)));
  std::vector<double> sup_upto(steps + 1, 0.0);
  for (int j = 1; j <= steps; ++j) {
    sup_upto[j] = std::max(sup_upto[j - 1], std::abs(riesz_sum(t, 0.25 * j, delta) - c));
  }

  for (double r = 0.5; r <= r_max; r += 1.0) rep.r_grid.push_back(r);
  rep.ratios = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rep.r_grid.size()));
  double partial = 0.0;
  int included = 0;
  for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
    const double r = rep.r_grid[i];
    while (included < riesz_count(r)) partial += t[included++];
    const double num = std::abs(partial - c);
    if (num == 0.0) continue;
    const double den = std::pow(r, delta) * sup_upto[static_cast<int>(std::floor(4.0 * (r + 1.0)))];
    if (den == 0.0) {
      rep.degenerate = true;
      continue;
    }
    rep.ratios[static_cast<Eigen::Index>(i)] = num / den;
    rep.max_ratio = std::max(rep.max_ratio, num / den);
  }
  return rep;
}

Eigen::VectorXd equivalence_probe(const CoefficientSeries& s, double delta, double x,
                                  const std::vector<int>& N_grid) {
  if (!(delta >= 0.0)) throw std::domain_error("equivalence_probe requires delta >= 0");
  if (N_grid.empty()) return {};
  const int N_top = *std::max_element(N_grid.begin(), N_grid.end());
  require_index(s, N_top);
  const Eigen::VectorXd t = s.terms(x);
  const Eigen::VectorXd sigma = cesaro_means(t, delta, N_top);
  Eigen::VectorXd gaps(static_cast<Eigen::Index>(N_grid.size()));
  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    const int N = N_grid[i];
    if (N < 0) throw std::out_of_range("negative Cesaro index");
    gaps[static_cast<Eigen::Index>(i)] = std::abs(sigma[N] - riesz_sum(t, N + 1.0, delta));
  }
  return gaps;
}

}  // namespace ortholab
