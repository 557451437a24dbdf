#include "ortholab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "ortholab/orthopoly.hpp"
#include "ortholab/specfun.hpp"

namespace ortholab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNodeBudget = 40'000'000;

// Monic three-term recurrence p_{j+1} = (x - a_j) p_j - b_j p_{j-1}.
struct Recurrence {
  Eigen::VectorXd a;  // j = 0..K-1
  Eigen::VectorXd b;  // j = 1..K-1 stored at index j-1
};

Recurrence jacobi_recurrence(double alpha, double beta, int K) {
  Recurrence r{Eigen::VectorXd(K), Eigen::VectorXd(std::max(K - 1, 0))};
  const double ab = alpha + beta;
  r.a[0] = (beta - alpha) / (ab + 2.0);
  for (int j = 1; j < K; ++j) {
    const double s = 2.0 * j + ab;
    r.a[j] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (j == 1) {
      // The (j + α + β) factor cancels; keeps α + β = -1 well defined.
      r.b[0] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      r.b[j - 1] = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  return r;
}

Recurrence laguerre_recurrence(double alpha, int K) {
  Recurrence r{Eigen::VectorXd(K), Eigen::VectorXd(std::max(K - 1, 0))};
  for (int j = 0; j < K; ++j) r.a[j] = 2.0 * j + alpha + 1.0;
  for (int j = 1; j < K; ++j) r.b[j - 1] = j * (j + alpha);
  return r;
}

Eigen::VectorXd tridiagonal_eigenvalues(const Recurrence& r) {
  const Eigen::Index K = r.a.size();
  if (K == 1) return r.a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::VectorXd diag = r.a;
  Eigen::VectorXd sub = r.b.cwiseSqrt();
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure(fmt::format("tridiagonal eigensolver did not converge (K = {})", K));
  }
  return es.eigenvalues();
}

// Newton polish of Gauss nodes, then Christoffel weights 1 / Σ_{j<K} p̂_j(x)².
// Weights from the eigenvectors lose all relative accuracy when they are tiny
// (large Laguerre nodes), the Christoffel form does not.
void polish_jacobi(double alpha, double beta, int K, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  const FamilySpec fam = FamilySpec::jacobi(alpha, beta);
  const FamilySpec shifted = FamilySpec::jacobi(alpha + 1.0, beta + 1.0);
  Eigen::VectorXd inv_h(K);
  for (int j = 0; j < K; ++j) inv_h[j] = 1.0 / jacobi_h<double>(fam, j);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (int step = 0; step < 2; ++step) {
      const double xi = std::clamp(x[i], -1.0, 1.0);
      const double p = jacobi_eval(fam, K, xi);
      const double dp = K > 0 ? 0.5 * (K + alpha + beta + 1.0) * jacobi_eval(shifted, K - 1, xi) : 1.0;
      if (dp == 0.0) break;
      const double next = xi - p / dp;
      if (!(next > -1.0 && next < 1.0)) break;
      x[i] = next;
    }
    const Eigen::VectorXd p = jacobi_eval_all(fam, K - 1, x[i]);
    w[i] = 1.0 / p.cwiseAbs2().cwiseProduct(inv_h).sum();
  }
}

void polish_laguerre(double alpha, int K, bool lebesgue, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (int step = 0; step < 2; ++step) {
      const double p = laguerre_eval(alpha, K, x[i]);
      const double dp = K > 0 ? -laguerre_eval(alpha + 1.0, K - 1, x[i]) : 1.0;
      if (dp == 0.0) break;
      const double next = x[i] - p / dp;
      if (!(next > 0.0)) break;
      x[i] = next;
    }
    // ℒ_j² = p̂_j² e^{-x} x^α, so Σ ℒ_j² = e^{-x} x^α / λ(x) for the Christoffel
    // function λ of e^{-x} x^α dx.
    const Eigen::VectorXd l = laguerre_fn_eval_all(alpha, K - 1, x[i]);
    const double s = l.squaredNorm();
    if (lebesgue) {
      w[i] = 1.0 / s;  // weight for ∫ f dx with f = e^{-x} · polynomial
    } else {
      w[i] = std::exp(-x[i] + alpha * std::log(x[i])) / s;
    }
  }
}

struct GaussJacobiTable {
  Eigen::VectorXd t, one_minus_t, one_plus_t, w;
};

// Cached Gauss–Jacobi rules on [-1, 1] for the weight (1-t)^a (1+t)^b.
const GaussJacobiTable& gauss_jacobi_table(double a, double b, int k) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, int>, GaussJacobiTable> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(a, b, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const QuadratureRule rule = gauss_rule(JacobiMeasure{a, b}, k);
  GaussJacobiTable table;
  table.t = rule.nodes;
  table.w = rule.weights;
  table.one_minus_t = (1.0 - rule.nodes.array()).matrix();
  table.one_plus_t = (1.0 + rule.nodes.array()).matrix();
  return cache.emplace(key, std::move(table)).first->second;
}

// Measure exponent folded at a subpanel end, or 0 if that end is regular.
double measure_exponent_lo(const Measure& m, double a) {
  if (const auto* j = std::get_if<JacobiMeasure>(&m)) return a == -1.0 ? j->beta : 0.0;
  if (const auto* l = std::get_if<LaguerreMeasure>(&m)) return a == 0.0 ? l->alpha : 0.0;
  return 0.0;
}

double measure_exponent_hi(const Measure& m, double b) {
  if (const auto* j = std::get_if<JacobiMeasure>(&m)) return b == 1.0 ? j->alpha : 0.0;
  return 0.0;
}

// Density with the folded singular factors left out.
double regular_density(const Measure& m, double x, double a, double b) {
  if (const auto* j = std::get_if<JacobiMeasure>(&m)) {
    double v = 1.0;
    if (j->alpha != 0.0 && b != 1.0) v *= std::pow(1.0 - x, j->alpha);
    if (j->beta != 0.0 && a != -1.0) v *= std::pow(1.0 + x, j->beta);
    return v;
  }
  if (const auto* l = std::get_if<LaguerreMeasure>(&m)) {
    double v = std::exp(-x);
    if (l->alpha != 0.0 && a != 0.0) v *= std::pow(x, l->alpha);
    return v;
  }
  return 1.0;
}

int base_subpanels(const Measure& m, double lo, double hi, int resolve_degree, int points) {
  const double budget = 0.5 * points;  // radians of phase per subpanel
  const double deg = resolve_degree + 1.0;
  double phase;
  if (is_jacobi_measure(m)) {
    phase = deg * (std::acos(std::clamp(lo, -1.0, 1.0)) - std::acos(std::clamp(hi, -1.0, 1.0)));
  } else {
    phase = 2.0 * std::sqrt(deg) * (std::sqrt(hi) - std::sqrt(lo)) + (hi - lo) / (4.0 * budget);
  }
  return std::max(1, static_cast<int>(std::ceil(phase / budget)));
}

void append_subpanel(const Measure& m, double a, double b, double hint_lo, double hint_hi, int k,
                     std::vector<double>& xs, std::vector<double>& ws) {
  const double m_lo = measure_exponent_lo(m, a);
  const double m_hi = measure_exponent_hi(m, b);
  const double e_lo = hint_lo + m_lo;
  const double e_hi = hint_hi + m_hi;
  const GaussJacobiTable& g = gauss_jacobi_table(e_hi, e_lo, k);
  const double half = 0.5 * (b - a);
  // Folded measure powers: (half·(1∓t))^e / (1∓t)^e = half^e.
  const double measure_scale = std::pow(half, m_lo + m_hi);
  for (int i = 0; i < k; ++i) {
    const double d_lo = half * g.one_plus_t[i];
    const double d_hi = half * g.one_minus_t[i];
    const double x = g.t[i] < 0.0 ? a + d_lo : b - d_hi;
    double w = g.w[i] * half * measure_scale * regular_density(m, x, a, b);
    if (hint_lo != 0.0) w /= std::pow(g.one_plus_t[i], hint_lo);
    if (hint_hi != 0.0) w /= std::pow(g.one_minus_t[i], hint_hi);
    xs.push_back(x);
    ws.push_back(w);
  }
}

std::string panel_label(const Interval& iv) { return fmt::format("[{:.17g}, {:.17g}]", iv.lo, iv.hi); }

template <class F>
double eval_on_panel(const F& f, double x, const Interval& iv) {
  try {
    return f(x);
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string(e.what()) + " on panel " + panel_label(iv));
  } catch (const NumericalFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " on panel " + panel_label(iv));
  }
}

}  // namespace

Measure family_measure(const FamilySpec& family) {
  if (family.is_jacobi()) return JacobiMeasure{family.alpha, family.beta};
  return HalfLineLebesgue{};
}

bool is_jacobi_measure(const Measure& m) { return std::holds_alternative<JacobiMeasure>(m); }

QuadratureRule gauss_rule(const Measure& measure, int K) {
  if (K < 1) throw std::out_of_range("gauss_rule requires K >= 1");
  QuadratureRule rule;
  rule.measure = measure;
  rule.exactness_degree = 2 * K - 1;
  if (const auto* j = std::get_if<JacobiMeasure>(&measure)) {
    if (!(j->alpha > -1.0) || !(j->beta > -1.0)) {
      throw std::domain_error("Jacobi measure requires alpha, beta > -1");
    }
    rule.nodes = tridiagonal_eigenvalues(jacobi_recurrence(j->alpha, j->beta, K));
    rule.weights.resize(K);
    polish_jacobi(j->alpha, j->beta, K, rule.nodes, rule.weights);
  } else {
    const bool lebesgue = std::holds_alternative<HalfLineLebesgue>(measure);
    const double alpha = lebesgue ? 0.0 : std::get<LaguerreMeasure>(measure).alpha;
    if (!(alpha > -1.0)) throw std::domain_error("Laguerre measure requires alpha > -1");
    rule.nodes = tridiagonal_eigenvalues(laguerre_recurrence(alpha, K));
    rule.weights.resize(K);
    polish_laguerre(alpha, K, lebesgue, rule.nodes, rule.weights);
  }
  return rule;
}

// ---------------------------------------------------------------------------

PanelFunction::PanelFunction(std::vector<Panel> panels, int resolve_degree)
    : panels_(std::move(panels)), resolve_degree_(resolve_degree) {
  if (panels_.empty()) throw std::invalid_argument("PanelFunction needs at least one panel");
  for (std::size_t i = 0; i < panels_.size(); ++i) {
    const Interval& iv = panels_[i].interval;
    if (!(iv.hi > iv.lo)) throw std::invalid_argument("panel " + panel_label(iv) + " is empty");
    if (i > 0 && panels_[i - 1].interval.hi != iv.lo) {
      throw std::invalid_argument("panels must be contiguous at " + panel_label(iv));
    }
    if (!panels_[i].f) throw std::invalid_argument("panel " + panel_label(iv) + " has no function");
  }
}

PanelFunction PanelFunction::single(Interval support, std::function<double(double)> f,
                                    int resolve_degree) {
  return PanelFunction({Panel{support, std::move(f), 0.0, 0.0}}, resolve_degree);
}

PanelFunction PanelFunction::constant(Interval support, double value) {
  return single(support, [value](double) { return value; }, 0);
}

double PanelFunction::operator()(double x) const {
  if (panels_.empty() || x < panels_.front().interval.lo || x > panels_.back().interval.hi) {
    return 0.0;
  }
  auto it = std::lower_bound(panels_.begin(), panels_.end(), x,
                             [](const Panel& p, double v) { return p.interval.hi < v; });
  if (it == panels_.end()) --it;
  return eval_on_panel(it->f, x, it->interval);
}

std::vector<Segment> segments_of(const PanelFunction& f, double lo, double hi) {
  std::vector<Segment> out;
  for (const Panel& p : f.panels()) {
    const double a = std::max(lo, p.interval.lo);
    const double b = std::min(hi, p.interval.hi);
    if (!(b > a)) continue;
    out.push_back({a, b, a == p.interval.lo ? p.lo_exponent : 0.0,
                   b == p.interval.hi ? p.hi_exponent : 0.0});
  }
  return out;
}

double integrate(const PanelFunction& f, const QuadratureRule& rule) {
  const bool jacobi = is_jacobi_measure(rule.measure);
  const double lo = jacobi ? -1.0 : 0.0;
  const double hi = jacobi ? 1.0 : kInf;
  const int K = static_cast<int>(rule.nodes.size());
  const auto& panels = f.panels();
  if (panels.size() == 1 && panels[0].interval.lo == lo && panels[0].interval.hi == hi &&
      panels[0].lo_exponent == 0.0 && panels[0].hi_exponent == 0.0) {
    return rule.sum([&](double x) { return eval_on_panel(panels[0].f, x, panels[0].interval); });
  }
  double total = 0.0;
  for (const Panel& p : panels) {
    const Interval& iv = p.interval;
    if (iv.lo < lo || iv.hi > hi) {
      throw std::domain_error("panel " + panel_label(iv) + " lies outside the measure support");
    }
    if (iv.bounded()) {
      const Segment seg{iv.lo, iv.hi, p.lo_exponent, p.hi_exponent};
      const NodeSet ns = composite_nodes(rule.measure, std::span(&seg, 1), 0, 0, K);
      for (Eigen::Index i = 0; i < ns.x.size(); ++i) total += ns.w[i] * eval_on_panel(p.f, ns.x[i], iv);
      continue;
    }
    if (iv.lo == 0.0) {
      total += rule.sum([&](double x) { return eval_on_panel(p.f, x, iv); });
      continue;
    }
    // [lo, ∞): Gauss–Laguerre in y = x - lo, density moved into the weights.
    const QuadratureRule shifted = gauss_rule(HalfLineLebesgue{}, K);
    for (int i = 0; i < K; ++i) {
      const double x = iv.lo + shifted.nodes[i];
      double dens = 1.0;
      if (const auto* l = std::get_if<LaguerreMeasure>(&rule.measure)) {
        dens = std::exp(-x + l->alpha * std::log(x));
      }
      total += shifted.weights[i] * dens * eval_on_panel(p.f, x, iv);
    }
  }
  return total;
}

NodeSet composite_nodes(const Measure& m, std::span<const Segment> segments, int resolve_degree,
                        int level, int points) {
  std::vector<double> xs, ws;
  const bool jacobi = is_jacobi_measure(m);
  std::size_t expected = 0;
  for (const Segment& s : segments) {
    expected += static_cast<std::size_t>(base_subpanels(m, s.lo, s.hi, resolve_degree, points))
                << level;
  }
  expected *= static_cast<std::size_t>(points);
  if (expected > kNodeBudget) {
    throw NumericalFailure(fmt::format("composite rule would need {} nodes", expected));
  }
  xs.reserve(expected);
  ws.reserve(expected);
  for (const Segment& s : segments) {
    if (!(s.hi > s.lo)) continue;
    if (!std::isfinite(s.hi)) throw std::domain_error("composite rule needs bounded segments");
    const int n = base_subpanels(m, s.lo, s.hi, resolve_degree, points) << level;
    double prev = s.lo;
    if (jacobi) {
      const double t_lo = std::acos(std::clamp(s.lo, -1.0, 1.0));
      const double t_hi = std::acos(std::clamp(s.hi, -1.0, 1.0));
      for (int j = 1; j <= n; ++j) {
        const double next = j == n ? s.hi : std::cos(t_lo + (t_hi - t_lo) * j / n);
        append_subpanel(m, prev, next, j == 1 ? s.lo_exponent : 0.0, j == n ? s.hi_exponent : 0.0,
                        points, xs, ws);
        prev = next;
      }
    } else {
      const double r_lo = std::sqrt(s.lo), r_hi = std::sqrt(s.hi);
      for (int j = 1; j <= n; ++j) {
        const double r = r_lo + (r_hi - r_lo) * j / n;
        const double next = j == n ? s.hi : r * r;
        append_subpanel(m, prev, next, j == 1 ? s.lo_exponent : 0.0, j == n ? s.hi_exponent : 0.0,
                        points, xs, ws);
        prev = next;
      }
    }
  }
  NodeSet out;
  out.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  out.w = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return out;
}

Eigen::VectorXd integrate_adaptive(const Measure& m, std::span<const Segment> segments,
                                   int resolve_degree,
                                   const std::function<Eigen::VectorXd(const NodeSet&)>& estimate,
                                   const Tolerance& tol) {
  Eigen::VectorXd prev = estimate(composite_nodes(m, segments, resolve_degree, 0));
  Eigen::VectorXd cur = prev;
  for (int level = 1; level <= tol.max_doublings; ++level) {
    NodeSet ns;
    try {
      ns = composite_nodes(m, segments, resolve_degree, level);
    } catch (const NumericalFailure& e) {
      Eigen::Index worst = 0;
      (cur - prev).cwiseAbs().maxCoeff(&worst);
      throw NumericalFailure(std::string(e.what()) + " before reaching tolerance",
                             cur.size() ? cur[worst] : 0.0, prev.size() ? prev[worst] : 0.0);
    }
    cur = estimate(ns);
    const double scale = cur.size() ? cur.cwiseAbs().maxCoeff() : 0.0;
    const double diff = cur.size() ? (cur - prev).cwiseAbs().maxCoeff() : 0.0;
    if (diff <= tol.rel * scale + tol.abs) return cur;
    if (level == tol.max_doublings) break;
    prev = cur;
  }
  Eigen::Index worst = 0;
  (cur - prev).cwiseAbs().maxCoeff(&worst);
  throw NumericalFailure(
      fmt::format("composite quadrature not converged after {} doublings", tol.max_doublings),
      cur[worst], prev[worst]);
}

double integrate_adaptive(const Measure& m, std::span<const Segment> segments, int resolve_degree,
                          const std::function<double(double)>& f, const Tolerance& tol) {
  auto est = [&](const NodeSet& ns) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ns.x.size(); ++i) s += ns.w[i] * f(ns.x[i]);
    return Eigen::VectorXd::Constant(1, s).eval();
  };
  return integrate_adaptive(m, segments, resolve_degree, est, tol)[0];
}

// ---------------------------------------------------------------------------

namespace {

// Illinois variant of regula falsi on a bracket with g(a) g(b) < 0.
double illinois(const std::function<double(double)>& g, double a, double b, double ga, double gb) {
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    const double c = (a * gb - b * ga) / (gb - ga);
    if (!(c > a && c < b) || b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(c)) {
      return std::clamp(c, a, b);
    }
    const double gc = g(c);
    if (gc == 0.0) return c;
    if ((gc > 0.0) == (gb > 0.0)) {
      b = c;
      gb = gc;
      if (side == -1) ga *= 0.5;
      side = -1;
    } else {
      a = c;
      ga = gc;
      if (side == 1) gb *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

void split_dip(const std::function<double(double)>& g, double a, double b, int depth, std::vector<double>& zeros) {
  constexpr int kSub = 16;
  const double v_a = g(a);
  double best = std::abs(v_a);
  int best_i = 0;
  std::vector<double> xs(kSub + 1), vs(kSub + 1);
  for (int i = 0; i <= kSub; ++i) {
    xs[i] = a + (b - a) * i / kSub;
    vs[i] = i == 0 ? v_a : g(xs[i]);
  }
  bool found = false;
  for (int i = 0; i < kSub; ++i) {
    if (vs[i] * vs[i + 1] < 0.0) {
      zeros.push_back(illinois(g, xs[i], xs[i + 1], vs[i], vs[i + 1]));
      found = true;
    }
    if (std::abs(vs[i + 1]) < best) {
      best = std::abs(vs[i + 1]);
      best_i = i + 1;
    }
  }
  if (!found && depth > 0 && best_i > 0 && best_i < kSub && best > 0.0) {
    split_dip(g, xs[best_i - 1], xs[best_i + 1], depth - 1, zeros);
  }
}

}  // namespace

std::vector<double> find_zeros(const std::function<double(double)>& g, double lo, double hi,
                               bool jacobi_warp, int degree) {
  std::vector<double> zeros;
  if (!(hi > lo)) return zeros;
  const double deg = std::max(degree, 1);
  std::vector<double> grid;
  if (jacobi_warp) {
    const double t_lo = std::acos(std::clamp(hi, -1.0, 1.0));
    const double t_hi = std::acos(std::clamp(lo, -1.0, 1.0));
    const int n = std::max(2, static_cast<int>(std::ceil((t_hi - t_lo) * 4.0 * deg / std::numbers::pi)));
    for (int j = 0; j <= n; ++j) grid.push_back(j == 0 ? lo : j == n ? hi : std::cos(t_hi - (t_hi - t_lo) * j / n));
  } else {
    const double r_lo = std::sqrt(lo), r_hi = std::sqrt(hi);
    const int n = std::max(2, static_cast<int>(std::ceil((r_hi - r_lo) * 8.0 * std::sqrt(deg) / std::numbers::pi)));
    for (int j = 0; j <= n; ++j) {
      const double r = r_lo + (r_hi - r_lo) * j / n;
      grid.push_back(j == 0 ? lo : j == n ? hi : r * r);
    }
  }
  std::vector<double> vals(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) vals[j] = g(grid[j]);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    if (vals[j] == 0.0) {
      // Underflowed stretches read as exact zeros; only isolated ones are roots.
      if (j > 0 && vals[j - 1] != 0.0 && vals[j + 1] != 0.0) zeros.push_back(grid[j]);
      continue;
    }
    if (vals[j] * vals[j + 1] < 0.0) {
      zeros.push_back(illinois(g, grid[j], grid[j + 1], vals[j], vals[j + 1]));
    } else if (j > 0 && vals[j - 1] * vals[j] > 0.0 && std::abs(vals[j]) < std::abs(vals[j - 1]) &&
               std::abs(vals[j]) < std::abs(vals[j + 1])) {
      // A dip in |g| without a sign change may hide a close pair of roots.
      split_dip(g, grid[j - 1], grid[j + 1], 3, zeros);
    }
  }
  std::sort(zeros.begin(), zeros.end());
  // Roots reached from both sides of a grid point can differ in the last bits.
  zeros.erase(std::unique(zeros.begin(), zeros.end(),
                          [&](double a, double b) { return b - a <= 1e-14 * std::max(1.0, std::abs(b)); }),
              zeros.end());
  return zeros;
}

double laguerre_cutoff(double alpha, int n) { return 8.0 * n + 8.0 * alpha + 16.0; }

// ---------------------------------------------------------------------------

namespace {

void require_support_in_measure(const PanelFunction& f, bool jacobi) {
  const Interval s = f.support();
  if (jacobi ? (s.lo < -1.0 || s.hi > 1.0) : s.lo < 0.0) {
    throw std::domain_error("function support " + panel_label(s) + " lies outside the measure support");
  }
}

// Adds the basis behaviour x^{α/2} of ℒ_n at the origin.
void add_laguerre_origin_hint(std::vector<Segment>& segs, double alpha) {
  for (Segment& s : segs) {
    if (s.lo == 0.0) s.lo_exponent += 0.5 * alpha;
  }
}

// Series of ∫ f φ_m over [lo, ∞): bounded part plus tail pieces doubling in
// length until they fall below tolerance.
Eigen::VectorXd laguerre_series(const PanelFunction& f, double alpha, int n_max, const Tolerance& tol,
                                const std::function<Eigen::VectorXd(const NodeSet&)>& est) {
  const Interval sup = f.support();
  const int resolve = f.resolve_degree() + n_max;
  double x_end = sup.hi;
  if (!sup.bounded()) x_end = std::max(laguerre_cutoff(alpha, n_max), sup.lo + 1.0);
  std::vector<Segment> segs = segments_of(f, sup.lo, x_end);
  add_laguerre_origin_hint(segs, alpha);
  Eigen::VectorXd total = integrate_adaptive(HalfLineLebesgue{}, segs, resolve, est, tol);
  if (sup.bounded()) return total;
  for (int piece = 0; piece < 60; ++piece) {
    const double a = x_end, b = 2.0 * x_end;
    std::vector<Segment> tail = segments_of(f, a, b);
    const Eigen::VectorXd t = integrate_adaptive(HalfLineLebesgue{}, tail, resolve, est, tol);
    total += t;
    x_end = b;
    if (t.cwiseAbs().maxCoeff() <= tol.rel * total.cwiseAbs().maxCoeff() + tol.abs) return total;
  }
  throw NumericalFailure("Laguerre coefficient tail did not decay", total.cwiseAbs().maxCoeff(), 0.0);
}

}  // namespace

double jacobi_coefficient(const PanelFunction& f, const FamilySpec& family, int n, const Tolerance& tol) {
  if (!family.is_jacobi()) throw std::invalid_argument("jacobi_coefficient needs a Jacobi family");
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  require_support_in_measure(f, true);
  const JacobiRecurrence<double> rec(family.alpha, family.beta, n);
  const Interval sup = f.support();
  const std::vector<Segment> segs = segments_of(f, sup.lo, sup.hi);
  auto integrand = [&](double x) {
    double p = 0.0;
    rec.sweep(x, [&](int m, double v) {
      if (m == n) p = v;
    });
    return f(x) * p;
  };
  return integrate_adaptive(family_measure(family), segs, f.resolve_degree() + n, integrand, tol);
}

double laguerre_fn_coefficient(const PanelFunction& f, double alpha, int n, const Tolerance& tol) {
  if (n < 0) throw std::out_of_range("degree must be non-negative");
  FamilySpec::laguerre(alpha);  // validates alpha
  require_support_in_measure(f, false);
  const LaguerreFunctionRecurrence<double> rec(alpha, n);
  auto est = [&](const NodeSet& ns) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ns.x.size(); ++i) {
      const double fx = f(ns.x[i]);
      if (fx == 0.0) continue;
      double l = 0.0;
      rec.sweep(ns.x[i], [&](int m, double v) {
        if (m == n) l = v;
      });
      s += ns.w[i] * fx * l;
    }
    return Eigen::VectorXd::Constant(1, s).eval();
  };
  return laguerre_series(f, alpha, n, tol, est)[0];
}

Eigen::VectorXd coefficient_vector(const PanelFunction& f, const FamilySpec& family, int n_max,
                                   const Tolerance& tol) {
  if (n_max < 0) throw std::out_of_range("degree must be non-negative");
  require_support_in_measure(f, family.is_jacobi());
  const FamilyRecurrence<double> rec(family, n_max);
  auto est = [&](const NodeSet& ns) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
    double* out = c.data();
    for (Eigen::Index i = 0; i < ns.x.size(); ++i) {
      const double v = ns.w[i] * f(ns.x[i]);
      if (v == 0.0) continue;
      rec.sweep(ns.x[i], [&](int m, double p) { out[m] += v * p; });
    }
    return c;
  };
  if (family.is_laguerre()) return laguerre_series(f, family.alpha, n_max, tol, est);
  const Interval sup = f.support();
  const std::vector<Segment> segs = segments_of(f, sup.lo, sup.hi);
  return integrate_adaptive(family_measure(family), segs, f.resolve_degree() + n_max, est, tol);
}

}  // namespace ortholab
