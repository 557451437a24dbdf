#include "ortholab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "ortholab/analysis.hpp"
#include "ortholab/orthopoly.hpp"
#include "ortholab/summability.hpp"

namespace ortholab {

namespace {

// Evaluates Σ_i coef_i φ_{deg_i}(x) with one recurrence pass.
class Combination {
 public:
  Combination(const FamilySpec& family, std::vector<int> degrees, std::vector<double> coefs)
      : degrees_(std::move(degrees)),
        coefs_(std::move(coefs)),
        rec_(family, *std::max_element(degrees_.begin(), degrees_.end())),
        slot_(static_cast<std::size_t>(rec_.n_max()) + 1, -1) {
    for (std::size_t i = 0; i < degrees_.size(); ++i) slot_[static_cast<std::size_t>(degrees_[i])] = static_cast<int>(i);
  }

  double operator()(double x) const {
    double s = 0.0;
    rec_.sweep(x, [&](int m, double v) {
      const int i = slot_[static_cast<std::size_t>(m)];
      if (i >= 0) s += coefs_[static_cast<std::size_t>(i)] * v;
    });
    return s;
  }

  /// Values of every φ_{deg_i}(x), in degree-list order.
  void basis(double x, double* out) const {
    rec_.sweep(x, [&](int m, double v) {
      const int i = slot_[static_cast<std::size_t>(m)];
      if (i >= 0) out[i] = v;
    });
  }

 private:
  std::vector<int> degrees_;
  std::vector<double> coefs_;
  FamilyRecurrence<double> rec_;
  std::vector<int> slot_;
};

double origin_exponent(const FamilySpec& family, const Interval& support, double power) {
  return family.is_laguerre() && support.lo == 0.0 ? 0.5 * family.alpha * power : 0.0;
}

std::vector<Segment> zero_partition(const std::vector<double>& zeros, const Interval& support, double e_zero,
                                    double e_lo) {
  std::vector<Segment> segs;
  double prev = support.lo;
  double prev_e = e_lo;
  for (double z : zeros) {
    if (!(z > prev && z < support.hi)) continue;
    segs.push_back({prev, z, prev_e, e_zero});
    prev = z;
    prev_e = e_zero;
  }
  segs.push_back({prev, support.hi, prev_e, 0.0});
  return segs;
}

void require_support(const FamilySpec& family, const Interval& support) {
  if (!(support.hi > support.lo) || !support.bounded()) throw std::domain_error("block support must be a bounded interval");
  if (family.is_jacobi() ? (support.lo < -1.0 || support.hi > 1.0) : support.lo < 0.0) {
    throw std::domain_error("block support lies outside the measure support");
  }
}

int block_resolve(int n, double q) { return std::max(1, static_cast<int>(std::ceil(q - 1.0))) * n; }

// Minimizes Σ w_i |target_i - (B t)_i|^q by damped Newton.
Eigen::VectorXd best_lq_approximation(const Eigen::VectorXd& target, const Eigen::MatrixXd& B,
                                      const Eigen::VectorXd& w, double q, Eigen::VectorXd t) {
  if (B.cols() == 0) return t;
  auto objective = [&](const Eigen::VectorXd& tt) {
    return (w.array() * (target - B * tt).array().abs().pow(q)).sum();
  };
  double F = objective(t);
  for (int it = 0; it < 200; ++it) {
    const Eigen::ArrayXd psi = (target - B * t).array();
    const Eigen::ArrayXd a = psi.abs();
    const Eigen::ArrayXd sg = psi.sign();
    const Eigen::VectorXd g = -q * (B.transpose() * (w.array() * sg * a.pow(q - 1.0)).matrix());
    const double floor = q < 2.0 ? 1e-6 * a.maxCoeff() : 0.0;
    const Eigen::VectorXd curv = (w.array() * a.max(floor).pow(q - 2.0)).matrix();
    const Eigen::MatrixXd H = q * (q - 1.0) * (B.transpose() * curv.asDiagonal() * B);
    const Eigen::VectorXd step = H.ldlt().solve(-g);
    const double slope = g.dot(step);
    if (!(slope < 0.0)) break;
    double s = 1.0;
    double F_new = objective(t + step);
    while (F_new > F + 1e-4 * s * slope && s > 1e-12) {
      s *= 0.5;
      F_new = objective(t + s * step);
    }
    if (F_new > F) break;
    t += s * step;
    const double moved = (s * step).cwiseAbs().maxCoeff();
    F = F_new;
    if (moved <= 1e-13 * (1.0 + t.cwiseAbs().maxCoeff())) break;
  }
  return t;
}

// Shared state of a block: ψ and the normalizing constant.
struct BlockData {
  Combination psi;
  double scale;  // 1 / ‖ψ‖^{q-1}
  double power;  // q - 1
};

DualExtremal assemble(const FamilySpec& family, int n, double p, Interval support, std::vector<int> annihilated,
                      Eigen::VectorXd t, const Tolerance& tol) {
  const double q = p / (p - 1.0);
  std::vector<int> degrees{n};
  std::vector<double> coefs{1.0};
  for (std::size_t i = 0; i < annihilated.size(); ++i) {
    degrees.push_back(annihilated[i]);
    coefs.push_back(-t[static_cast<Eigen::Index>(i)]);
  }
  const int top = *std::max_element(degrees.begin(), degrees.end());
  auto psi = std::make_shared<Combination>(family, degrees, coefs);
  auto eval = [psi](double x) { return (*psi)(x); };

  std::vector<double> zeros = find_zeros(eval, support.lo, support.hi, family.is_jacobi(), top);
  const double e0 = eval(support.lo) == 0.0 ? 1.0 : 0.0;  // ψ vanishing at the left end

  // ‖ψ‖_q
  const double e_lo_norm = origin_exponent(family, support, q) + e0 * q;
  const std::vector<Segment> segs = zero_partition(zeros, support, q, e_lo_norm);
  auto integrand = [&](double x) { return std::pow(std::abs(eval(x)), q); };
  const double I = integrate_adaptive(family_measure(family), segs, static_cast<int>(std::ceil(q)) * top, integrand, tol);
  if (!(I > 0.0) || !std::isfinite(I)) {
    throw NumericalFailure(fmt::format("L^q norm of the degree-{} block is degenerate", n), I, 0.0);
  }
  const double norm = std::pow(I, 1.0 / q);

  auto data = std::make_shared<BlockData>(BlockData{*psi, std::pow(norm, -(q - 1.0)), q - 1.0});
  auto g = [data](double x) {
    const double v = data->psi(x);
    if (v == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(v), data->power), v) * data->scale;
  };
  std::vector<Panel> panels;
  const std::vector<Segment> block_segs =
      zero_partition(zeros, support, q - 1.0, origin_exponent(family, support, q - 1.0) + e0 * (q - 1.0));
  for (const Segment& s : block_segs) panels.push_back({{s.lo, s.hi}, g, s.lo_exponent, s.hi_exponent});

  DualExtremal d;
  d.family = family;
  d.n = n;
  d.p = p;
  d.support = support;
  d.annihilated = std::move(annihilated);
  d.t = std::move(t);
  d.psi_norm = norm;
  d.block = PanelFunction(std::move(panels), block_resolve(top, q));
  return d;
}

}  // namespace

DualExtremal dual_extremal_from(const FamilySpec& family, int n, double p, Interval support,
                                const std::vector<int>& annihilated, const Eigen::VectorXd& t,
                                const Tolerance& tol) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("dual extremal requires 1 < p < inf");
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  if (static_cast<std::size_t>(t.size()) != annihilated.size()) {
    throw std::invalid_argument("annihilator coefficients and degrees differ in length");
  }
  require_support(family, support);
  return assemble(family, n, p, support, annihilated, t, tol);
}

DualExtremal annihilating_dual_extremal(const FamilySpec& family, int n, double p, Interval support,
                                        const std::vector<int>& annihilate, const Tolerance& tol) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("dual extremal requires 1 < p < inf");
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  require_support(family, support);
  for (int m : annihilate) {
    if (m < 0 || m == n) throw std::invalid_argument("annihilated degrees must be non-negative and differ from n");
  }
  const double q = p / (p - 1.0);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(annihilate.size()));
  if (!annihilate.empty()) {
    // Best approximation on a composite rule split at the zeros of the current
    // ψ, where |ψ|^{q-1} has its cusps. The zeros move with t, so re-split.
    const int top = std::max(n, *std::max_element(annihilate.begin(), annihilate.end()));
    const int resolve = (static_cast<int>(std::ceil(q - 1.0)) + 1) * top;
    std::vector<int> degrees{n};
    degrees.insert(degrees.end(), annihilate.begin(), annihilate.end());
    const Combination basis(family, degrees, std::vector<double>(degrees.size(), 0.0));
    const Eigen::Index K = static_cast<Eigen::Index>(annihilate.size());
    const double e_origin = origin_exponent(family, support, q - 1.0);
    std::vector<Segment> segs{{support.lo, support.hi, e_origin, 0.0}};
    std::vector<double> row(degrees.size());
    for (int pass = 0; pass < 3; ++pass) {
      const NodeSet ns = composite_nodes(family_measure(family), segs, resolve, 1);
      Eigen::VectorXd target(ns.x.size());
      Eigen::MatrixXd B(ns.x.size(), K);
      for (Eigen::Index i = 0; i < ns.x.size(); ++i) {
        basis.basis(ns.x[i], row.data());
        target[i] = row[0];
        for (Eigen::Index j = 0; j < K; ++j) B(i, j) = row[static_cast<std::size_t>(j) + 1];
      }
      t = best_lq_approximation(target, B, ns.w, q, t);
      std::vector<double> coefs{1.0};
      for (Eigen::Index j = 0; j < K; ++j) coefs.push_back(-t[j]);
      const Combination psi(family, degrees, coefs);
      const auto zeros = find_zeros([&](double x) { return psi(x); }, support.lo, support.hi, family.is_jacobi(), top);
      segs = zero_partition(zeros, support, q - 1.0, e_origin);
    }
  }
  return assemble(family, n, p, support, annihilate, t, tol);
}

PanelFunction dual_extremal(const FamilySpec& family, int n, double p, Interval support, const Tolerance& tol) {
  return annihilating_dual_extremal(family, n, p, support, {}, tol).block;
}

double lp_norm(const PanelFunction& g, const FamilySpec& family, double r, const Tolerance& tol) {
  if (!(r >= 1.0)) throw std::domain_error("lp_norm requires r >= 1");
  const Interval sup = g.support();
  std::vector<Segment> segs;
  for (Segment s : segments_of(g, sup.lo, sup.hi)) {
    s.lo_exponent *= r;
    s.hi_exponent *= r;
    // Sign changes inside a panel are kinks of |g|^r; cut there so they sit on panel ends.
    const double margin = 1e-12 * std::max(1.0, std::abs(s.hi));
    for (double z : find_zeros(g, s.lo, s.hi, family.is_jacobi(), std::max(1, g.resolve_degree()))) {
      if (z - s.lo <= margin || s.hi - z <= margin) continue;
      segs.push_back({s.lo, z, s.lo_exponent, r});
      s.lo = z;
      s.lo_exponent = r;
    }
    segs.push_back(s);
  }
  auto integrand = [&](double x) { return std::pow(std::abs(g(x)), r); };
  const int resolve = static_cast<int>(std::ceil(g.resolve_degree() * r));
  return std::pow(integrate_adaptive(family_measure(family), segs, resolve, integrand, tol), 1.0 / r);
}

double psi_lq_norm(const DualExtremal& d, double q, const Tolerance& tol) {
  const double q_block = d.p / (d.p - 1.0);
  std::vector<Segment> segs = segments_of(d.block, d.support.lo, d.support.hi);
  const double scale = q_block - 1.0 > 0.0 ? q / (q_block - 1.0) : 1.0;
  for (Segment& s : segs) {
    s.lo_exponent *= scale;
    s.hi_exponent *= scale;
  }
  std::vector<int> degrees{d.n};
  std::vector<double> coefs{1.0};
  for (std::size_t i = 0; i < d.annihilated.size(); ++i) {
    degrees.push_back(d.annihilated[i]);
    coefs.push_back(-d.t[static_cast<Eigen::Index>(i)]);
  }
  const Combination psi(d.family, degrees, coefs);
  auto integrand = [&](double x) { return std::pow(std::abs(psi(x)), q); };
  const int top = *std::max_element(degrees.begin(), degrees.end());
  const int resolve = static_cast<int>(std::ceil(q)) * top;
  return std::pow(integrate_adaptive(family_measure(d.family), segs, resolve, integrand, tol), 1.0 / q);
}

// ---------------------------------------------------------------------------

Eigen::VectorXd Witness::amplitudes() const {
  Eigen::VectorXd a(static_cast<Eigen::Index>(levels.size()));
  for (std::size_t k = 0; k < levels.size(); ++k) a[static_cast<Eigen::Index>(k)] = levels[k].amplitude;
  return a;
}

PanelFunction Witness::function() const {
  if (levels.empty()) throw std::logic_error("witness has no levels");
  std::vector<double> cuts{support.lo, support.hi};
  int resolve = 0;
  for (const WitnessLevel& l : levels) {
    for (const Panel& p : l.block.block.panels()) cuts.push_back(p.interval.lo);
    resolve = std::max(resolve, l.block.block.resolve_degree());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto blocks = std::make_shared<std::vector<std::pair<double, PanelFunction>>>();
  for (const WitnessLevel& l : levels) blocks->push_back({l.amplitude, l.block.block});
  auto f = [blocks](double x) {
    double s = 0.0;
    for (const auto& [a, g] : *blocks) s += a * g(x);
    return s;
  };
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i] && cuts[i] >= support.lo && cuts[i + 1] <= support.hi) {
      panels.push_back({{cuts[i], cuts[i + 1]}, f, 0.0, 0.0});
    }
  }
  return PanelFunction(std::move(panels), resolve);
}

void compute_block_coefficients(Witness& w, int N_max, const Tolerance& tol) {
  w.block_coefficients.resize(N_max + 1, static_cast<Eigen::Index>(w.levels.size()));
  for (std::size_t k = 0; k < w.levels.size(); ++k) {
    w.block_coefficients.col(static_cast<Eigen::Index>(k)) =
        coefficient_vector(w.levels[k].block.block, w.family, N_max, tol);
  }
}

Eigen::VectorXd witness_rho(const Witness& w) {
  const Eigen::VectorXd c = w.coefficients();
  const double shift = w.family.is_jacobi() ? w.delta - 0.5 : w.delta + 0.25;
  Eigen::VectorXd rho(static_cast<Eigen::Index>(w.levels.size()));
  for (std::size_t k = 0; k < w.levels.size(); ++k) {
    const int n = w.levels[k].n;
    if (n >= c.size()) throw std::out_of_range("witness coefficients do not reach the level degrees");
    rho[static_cast<Eigen::Index>(k)] = std::abs(c[n]) / std::pow(static_cast<double>(n), shift);
  }
  return rho;
}

bool rho_increasing(const Eigen::VectorXd& rho) {
  if (rho.size() < 3) return false;
  for (Eigen::Index k = 2; k < rho.size(); ++k) {
    if (!(rho[k] > rho[k - 1])) return false;
  }
  return true;
}

namespace {

std::string format_attempt(const BuildAttempt& a) {
  std::string s = fmt::format("L = {}: {}\n  k   n_k   rho   contamination   own\n", a.lacunarity, a.reason);
  for (std::size_t k = 0; k < a.degrees.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    s += fmt::format("  {}  {}  {:.6g}  {:.3e}  {:.3e}\n", k + 1, a.degrees[k], i < a.rho.size() ? a.rho[i] : 0.0,
                     i < a.contamination.size() ? a.contamination[i] : 0.0, i < a.own.size() ? a.own[i] : 0.0);
  }
  return s;
}

std::string format_attempts(const std::vector<BuildAttempt>& attempts) {
  std::string s = "witness build failed\n";
  for (const BuildAttempt& a : attempts) s += format_attempt(a);
  return s;
}

}  // namespace

WitnessBuildFailure::WitnessBuildFailure(std::vector<BuildAttempt> attempts)
    : std::runtime_error(format_attempts(attempts)), attempts_(std::move(attempts)) {}

void require_witness_range(const FamilySpec& family, double p, double delta) {
  family.require_theorem_range();
  if (family.is_jacobi()) {
    const double pc = critical_indices(family.alpha).p_c;
    if (!(p > 1.0 && p < pc)) throw std::domain_error(fmt::format("Jacobi witness requires 1 < p < p_c = {}", pc));
    const double bound = jacobi_delta_bound(family.alpha, p);
    if (!(delta >= 0.0 && delta < bound)) {
      throw std::domain_error(fmt::format("Jacobi witness requires 0 <= delta < {}", bound));
    }
  } else {
    if (!(p > 4.0) || !std::isfinite(p)) throw std::domain_error("Laguerre witness requires 4 < p < inf");
    const double bound = laguerre_delta_bound(p);
    if (!(delta > 0.0 && delta < bound)) {
      throw std::domain_error(fmt::format("Laguerre witness requires 0 < delta < {}", bound));
    }
  }
}

Witness build_witness(const FamilySpec& family, double p, double delta, int K, int n1, const BuildOptions& options) {
  if (options.enforce_theorem_range) require_witness_range(family, p, delta);
  if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("witness requires 1 < p < inf");
  if (K < 1) throw std::domain_error("witness needs at least one level");
  if (n1 < 1) throw std::domain_error("starting degree must be positive");
  if (!(options.lacunarity >= 2.0)) throw std::domain_error("lacunarity must be at least 2");

  const double bound = family.is_jacobi() ? jacobi_delta_exponent(family.alpha, p) : 0.25 - 1.0 / p;
  const double gap = bound - delta;
  const double q = p / (p - 1.0);
  std::vector<BuildAttempt> attempts;
  double L = options.lacunarity;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt, L *= 2.0) {
    BuildAttempt rec;
    rec.lacunarity = L;
    std::vector<int> ns;
    bool too_big = false;
    for (int k = 0; k < K; ++k) {
      const double n = n1 * std::pow(L, k);
      if (n > options.max_degree) too_big = true;
      ns.push_back(static_cast<int>(std::min(n, 1e9)));
    }
    rec.degrees = ns;
    if (too_big) {
      rec.reason = fmt::format("top degree exceeds the cap {}", options.max_degree);
      attempts.push_back(rec);
      break;
    }

    Witness w;
    w.family = family;
    w.p = p;
    w.delta = delta;
    w.lacunarity = L;
    w.support = family.is_jacobi() ? Interval{0.0, 1.0} : Interval{0.0, laguerre_cutoff(family.alpha, ns.back())};
    for (int k = 0; k < K; ++k) {
      WitnessLevel lvl;
      lvl.k = k + 1;
      lvl.n = ns[static_cast<std::size_t>(k)];
      lvl.amplitude = gap > 0.0 ? std::pow(static_cast<double>(lvl.n) / n1, -options.amplitude_gap_fraction * gap)
                                : 1.0 / ((k + 1.0) * (k + 1.0));
      // Upward annihilation is ill-conditioned when q < 2 (c_m(g) moves like
      // |t|^{q-1} near t = 0) and the lower blocks' high coefficients are
      // small there anyway, so it is only done for q >= 2.
      std::vector<int> others(ns.begin(), ns.begin() + k);
      if (q >= 2.0) others.insert(others.end(), ns.begin() + k + 1, ns.end());
      lvl.block = annihilating_dual_extremal(family, lvl.n, p, w.support, others, options.tol);
      w.levels.push_back(std::move(lvl));
    }
    compute_block_coefficients(w, ns.back(), options.tol);

    const Eigen::VectorXd a = w.amplitudes();
    rec.rho = witness_rho(w);
    rec.contamination.resize(K);
    rec.own.resize(K);
    bool contaminated = false;
    for (int k = 0; k < K; ++k) {
      const double own = a[k] * w.block_coefficients(ns[static_cast<std::size_t>(k)], k);
      const double total = w.block_coefficients.row(ns[static_cast<std::size_t>(k)]).dot(a);
      rec.own[k] = own;
      rec.contamination[k] = std::abs(total - own);
      if (rec.contamination[k] > 0.5 * std::abs(own)) contaminated = true;
    }
    bool monotone = true;
    for (int k = 2; k < K; ++k) monotone = monotone && rec.rho[k] > rec.rho[k - 1];
    if (!contaminated && monotone) return w;
    rec.reason = contaminated ? "cross-level contamination above half the level's own coefficient"
                              : "rho not strictly increasing from k = 2";
    attempts.push_back(rec);
    // Wider spacing only cleans up interference; it cannot turn a falling trend.
    if (!contaminated && K >= 3 && !(rec.rho[K - 1] > rec.rho[1])) break;
  }
  throw WitnessBuildFailure(std::move(attempts));
}

WitnessReport witness_report(Witness& w, const std::vector<double>& x_samples, const std::vector<int>& N_grid) {
  if (N_grid.empty()) throw std::invalid_argument("N grid is empty");
  std::vector<int> grid = N_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 0) throw std::out_of_range("negative index in the N grid");
  int N_top = grid.back();
  for (const WitnessLevel& l : w.levels) N_top = std::max(N_top, l.n);
  if (w.block_coefficients.rows() <= N_top || w.block_coefficients.cols() != static_cast<Eigen::Index>(w.levels.size())) {
    compute_block_coefficients(w, N_top);
  }

  WitnessReport rep;
  rep.rho = witness_rho(w);
  rep.bound_violation = rho_increasing(rep.rho);
  rep.x_samples = x_samples;
  rep.N_grid = grid;
  const CoefficientSeries series = CoefficientSeries::from_coefficients(w.family, w.coefficients());
  const auto K = static_cast<Eigen::Index>(w.levels.size());
  rep.mean_magnitudes.resize(static_cast<Eigen::Index>(x_samples.size()), 2);
  rep.level_max_cesaro = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x_samples.size()), K);
  std::vector<double> r_grid;
  for (int N : grid) {
    if (N > 0) r_grid.push_back(N);
  }
  for (std::size_t i = 0; i < x_samples.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::VectorXd terms = series.terms(x_samples[i]);
    const Eigen::VectorXd sigma = cesaro_means(terms, w.delta, grid.back());
    const Eigen::VectorXd riesz = riesz_means(terms, w.delta, r_grid);
    double max_sigma = 0.0;
    for (int N : grid) {
      const double v = std::abs(sigma[N]);
      max_sigma = std::max(max_sigma, v);
      for (Eigen::Index k = 0; k < K; ++k) {
        if (N <= w.levels[static_cast<std::size_t>(k)].n) {
          rep.level_max_cesaro(row, k) = std::max(rep.level_max_cesaro(row, k), v);
        }
      }
    }
    rep.mean_magnitudes(row, 0) = max_sigma;
    rep.mean_magnitudes(row, 1) = riesz.size() ? riesz.cwiseAbs().maxCoeff() : 0.0;
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

nlohmann::json to_json(const Witness& w) {
  nlohmann::json j;
  j["family"] = {{"kind", w.family.name()}, {"alpha", w.family.alpha}};
  if (w.family.is_jacobi()) j["family"]["beta"] = w.family.beta;
  j["p"] = w.p;
  j["delta"] = w.delta;
  j["support"] = {w.support.lo, w.support.hi};
  j["lacunarity"] = w.lacunarity;
  nlohmann::json levels = nlohmann::json::array();
  for (const WitnessLevel& l : w.levels) {
    levels.push_back({{"k", l.k},
                      {"n", l.n},
                      {"amplitude", l.amplitude},
                      {"annihilated", l.block.annihilated},
                      {"annihilator", to_std(l.block.t)},
                      {"psi_norm", l.block.psi_norm}});
  }
  j["levels"] = levels;
  return j;
}

nlohmann::json to_json(const WitnessReport& r) {
  nlohmann::json j;
  j["rho"] = to_std(r.rho);
  j["bound_violation"] = r.bound_violation;
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < r.x_samples.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    samples.push_back({{"x", r.x_samples[i]},
                       {"max_cesaro", r.mean_magnitudes(row, 0)},
                       {"max_riesz", r.mean_magnitudes(row, 1)},
                       {"level_max_cesaro", to_std(r.level_max_cesaro.row(row).transpose())}});
  }
  j["samples"] = samples;
  j["N_min"] = r.N_grid.empty() ? 0 : r.N_grid.front();
  j["N_max"] = r.N_grid.empty() ? 0 : r.N_grid.back();
  j["N_count"] = r.N_grid.size();
  return j;
}

Witness witness_from_json(const nlohmann::json& j, const Tolerance& tol) {
  Witness w;
  const auto& fam = j.at("family");
  const std::string kind = fam.at("kind").get<std::string>();
  if (kind == "jacobi") {
    w.family = FamilySpec::jacobi(fam.at("alpha").get<double>(), fam.at("beta").get<double>());
  } else if (kind == "laguerre") {
    w.family = FamilySpec::laguerre(fam.at("alpha").get<double>());
  } else {
    throw std::invalid_argument("unknown family kind '" + kind + "'");
  }
  w.p = j.at("p").get<double>();
  w.delta = j.at("delta").get<double>();
  w.support = {j.at("support").at(0).get<double>(), j.at("support").at(1).get<double>()};
  w.lacunarity = j.value("lacunarity", 2.0);
  for (const auto& l : j.at("levels")) {
    WitnessLevel lvl;
    lvl.k = l.at("k").get<int>();
    lvl.n = l.at("n").get<int>();
    lvl.amplitude = l.at("amplitude").get<double>();
    const auto annihilated = l.at("annihilated").get<std::vector<int>>();
    const auto t = l.at("annihilator").get<std::vector<double>>();
    const Eigen::VectorXd tv = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
    lvl.block = dual_extremal_from(w.family, lvl.n, w.p, w.support, annihilated, tv, tol);
    w.levels.push_back(std::move(lvl));
  }
  return w;
}

}  // namespace ortholab
