#include "ortholab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ortholab/analysis.hpp"
#include "ortholab/errors.hpp"
#include "ortholab/orthopoly.hpp"
#include "ortholab/quadrature.hpp"
#include "ortholab/summability.hpp"
#include "ortholab/witness.hpp"

namespace ortholab::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return fmt::format("{:.17g}", v); }

json cell(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

FamilySpec family_of(const RunConfig& c) {
  if (c.family == "jacobi") return FamilySpec::jacobi(c.alpha, c.beta);
  if (c.family == "laguerre") return FamilySpec::laguerre(c.alpha);
  throw std::invalid_argument("unknown family '" + c.family + "' (jacobi or laguerre)");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

void check_x(const FamilySpec& f, const std::vector<double>& xs) {
  for (double x : xs) {
    if (f.is_jacobi() && !(x >= -1.0 && x <= 1.0)) {
      throw std::domain_error(fmt::format("x = {} outside [-1, 1]", x));
    }
    if (f.is_laguerre() && !(x >= 0.0 && std::isfinite(x))) {
      throw std::domain_error(fmt::format("x = {} outside [0, inf)", x));
    }
  }
}

}  // namespace

std::vector<int> RunConfig::n_grid() const {
  if (!n_list.empty()) {
    for (int n : n_list) {
      if (n < 0) throw std::out_of_range("degrees must be non-negative");
    }
    return n_list;
  }
  if (!n_min || !n_max) throw std::invalid_argument("degree grid needs --n or both --n-min and --n-max");
  if (*n_min < 0 || *n_max < *n_min) throw std::out_of_range("degree grid needs 0 <= n-min <= n-max");
  if (n_geom) {
    if (*n_geom < 2 || *n_min < 1) throw std::out_of_range("--n-geom needs at least 2 points and n-min >= 1");
    return geometric_grid(*n_min, *n_max, *n_geom);
  }
  if (n_step < 1) throw std::out_of_range("--n-step must be positive");
  std::vector<int> g;
  for (int n = *n_min; n <= *n_max; n += n_step) g.push_back(n);
  return g;
}

std::vector<double> RunConfig::x_values() const {
  if (!x_list.empty()) return x_list;
  if (x_grid.empty()) throw std::invalid_argument("point grid needs --x or --x-grid");
  const auto parts = split(x_grid, ':');
  if (parts.size() != 3) throw std::invalid_argument("--x-grid expects lo:hi:count");
  const double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
  const double count = parse_double(parts[2]);
  if (!(count >= 1.0) || count != std::floor(count)) throw std::invalid_argument("--x-grid count must be a positive integer");
  const int m = static_cast<int>(count);
  std::vector<double> xs;
  for (int i = 0; i < m; ++i) xs.push_back(m == 1 ? lo : lo + (hi - lo) * i / (m - 1));
  return xs;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e{
      {"command", command}, {"family", family}, {"alpha", num(alpha)}, {"beta", num(beta)},
      {"p", p ? num(*p) : "none"}, {"q", num(q)}, {"r", num(r)}, {"delta", num(delta)}};
  std::string ns;
  for (int n : n_list) ns += (ns.empty() ? "" : ",") + std::to_string(n);
  e.emplace_back("n", ns.empty() ? "none" : ns);
  e.emplace_back("n_min", n_min ? std::to_string(*n_min) : "none");
  e.emplace_back("n_max", n_max ? std::to_string(*n_max) : "none");
  e.emplace_back("n_step", std::to_string(n_step));
  e.emplace_back("n_geom", n_geom ? std::to_string(*n_geom) : "none");
  std::string xs;
  for (double x : x_list) xs += (xs.empty() ? "" : ",") + num(x);
  e.emplace_back("x", xs.empty() ? "none" : xs);
  e.emplace_back("x_grid", x_grid.empty() ? "none" : x_grid);
  e.emplace_back("levels", std::to_string(levels));
  e.emplace_back("tol", num(tol));
  e.emplace_back("function", function);
  e.emplace_back("intervals", intervals);
  return e;
}

// ---------------------------------------------------------------------------

Table cmd_eval(const RunConfig& c) {
  const FamilySpec f = family_of(c);
  const std::vector<int> ns = c.n_grid();
  const std::vector<double> xs = c.x_values();
  check_x(f, xs);
  Table t{{"n", "x", "value", "asymptotic_main_term", "residual"}, {}, {}};
  const int top = max_of(ns);
  for (double x : xs) {
    const Eigen::VectorXd v = f.is_jacobi() ? jacobi_eval_all(f, top, x) : laguerre_eval_all(f.alpha, top, x);
    for (int n : ns) {
      double main = kNaN;
      if (n >= 1) {
        if (f.is_jacobi() && x > -1.0 && x < 1.0) main = jacobi_asymptotic(f, n, std::acos(x));
        if (f.is_laguerre() && x > 0.0) main = laguerre_asymptotic(f.alpha, n, x);
      }
      t.rows.push_back({n, cell(x), cell(v[n]), cell(main), cell(v[n] - main)});
    }
  }
  return t;
}

Table cmd_normscan(const RunConfig& c, std::ostream& progress) {
  const FamilySpec f = family_of(c);
  f.require_theorem_range();
  const std::vector<int> ns = c.n_grid();
  if (!(c.q >= 1.0)) throw std::domain_error("normscan requires q >= 1");
  const RegimePrediction pred =
      f.is_jacobi() ? predicted_jacobi_regime(f.alpha, c.q, c.r) : predicted_laguerre_regime(c.q);
  if (f.is_jacobi() && !(c.r > -1.0 / c.q)) throw std::domain_error("normscan requires r > -1/q");
  const Tolerance tol{std::max(c.tol, 1e-12), 1e-300, 20};
  Table t{{"n", "norm"}, {}, {}};
  std::vector<double> xs, values;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    const double v = f.is_jacobi() ? jacobi_weighted_norm(f, n, c.q, c.r, tol) : laguerre_fn_norm(f.alpha, n, c.q, tol);
    progress << fmt::format("normscan {}/{} n = {}\n", i + 1, ns.size(), n) << std::flush;
    t.rows.push_back({n, cell(v)});
    xs.push_back(n);
    values.push_back(v);
  }
  t.trailer.emplace_back("predicted_regime", regime_name(pred.regime));
  t.trailer.emplace_back("predicted_exponent", cell(pred.exponent));
  if (ns.size() >= 4) {
    const GrowthFit fit = fit_growth_exponent(xs, values);
    t.trailer.emplace_back("fitted_slope", cell(fit.slope));
    t.trailer.emplace_back("slope_ci", cell(fit.ci));
    if (pred.regime != Regime::Unpredicted) {
      const SlopeWindow w = slope_window(f, pred);
      t.trailer.emplace_back("window_lo", cell(w.lo));
      t.trailer.emplace_back("window_hi", cell(w.hi));
      t.trailer.emplace_back("pass", w.contains(fit.slope));
    }
  }
  return t;
}

namespace {

PanelFunction test_function(const FamilySpec& f, const std::string& name) {
  const double inf = std::numeric_limits<double>::infinity();
  if (f.is_jacobi()) {
    if (name == "one") return PanelFunction::constant({-1.0, 1.0}, 1.0);
    if (name == "x3") return PanelFunction::single({-1.0, 1.0}, [](double x) { return x * x * x; }, 3);
    if (name == "abs") {
      auto a = [](double x) { return std::abs(x); };
      return PanelFunction({{{-1.0, 0.0}, a, 0.0, 0.0}, {{0.0, 1.0}, a, 0.0, 0.0}}, 1);
    }
    if (name == "step") return PanelFunction::constant({0.0, 1.0}, 1.0);
    throw std::invalid_argument("Jacobi test functions: one, x3, abs, step");
  }
  if (name == "exp") return PanelFunction::single({0.0, inf}, [](double x) { return std::exp(-x / 2); }, 0);
  if (name == "step") return PanelFunction::constant({0.0, 1.0}, 1.0);
  if (name == "hump") return PanelFunction::single({0.0, inf}, [](double x) { return x * std::exp(-x / 2); }, 1);
  throw std::invalid_argument("Laguerre test functions: exp, step, hump");
}

}  // namespace

Table cmd_sum(const RunConfig& c) {
  const FamilySpec f = family_of(c);
  const std::vector<int> Ns = c.n_grid();
  const std::vector<double> xs = c.x_values();
  check_x(f, xs);
  if (!(c.delta >= 0.0)) throw std::domain_error("sum requires delta >= 0");
  const PanelFunction g = test_function(f, c.function);
  const int top = max_of(Ns);
  const CoefficientSeries s =
      CoefficientSeries::from_coefficients(f, coefficient_vector(g, f, top, {c.tol, 1e-14, 20}));
  Table t{{"x", "N", "cesaro", "riesz", "partial_sum"}, {}, {}};
  std::vector<double> r_grid;
  for (int N : Ns) r_grid.push_back(N + 1.0);
  for (double x : xs) {
    const Eigen::VectorXd terms = s.terms(x);
    const Eigen::VectorXd sigma = cesaro_means(terms, c.delta, top);
    const Eigen::VectorXd riesz = riesz_means(terms, c.delta, r_grid);
    const Eigen::VectorXd part = riesz_means(terms, 0.0, r_grid);
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      t.rows.push_back({cell(x), Ns[i], cell(sigma[Ns[i]]), cell(riesz[k]), cell(part[k])});
    }
  }
  t.trailer.emplace_back("riesz_r", "N + 1");
  return t;
}

namespace {

std::vector<double> default_samples(const FamilySpec& f, int n1) {
  std::vector<double> xs;
  for (int j = 0; j < 11; ++j) {
    const double u = (j + 1) / 12.0;
    xs.push_back(f.is_jacobi() ? std::cos(std::numbers::pi / 2 * u) : 4.0 * n1 * u * u);
  }
  return xs;
}

}  // namespace

nlohmann::json cmd_witness(const RunConfig& c, std::ostream& progress) {
  const FamilySpec f = family_of(c);
  if (!c.p) throw std::invalid_argument("witness needs --p");
  require_witness_range(f, *c.p, c.delta);
  if (c.levels < 1) throw std::out_of_range("--levels must be at least 1");
  const int n1 = c.n_min.value_or(8);
  if (n1 < 1) throw std::out_of_range("starting degree must be positive");
  const std::vector<double> xs = c.x_list.empty() && c.x_grid.empty() ? default_samples(f, n1) : c.x_values();
  check_x(f, xs);

  progress << fmt::format("witness: building {} levels from n_1 = {}\n", c.levels, n1) << std::flush;
  BuildOptions opts;
  opts.tol = {c.tol, 1e-14, 20};
  Witness w = build_witness(f, *c.p, c.delta, c.levels, n1, opts);
  progress << fmt::format("witness: lacunarity {}, top degree {}\n", w.lacunarity, w.levels.back().n) << std::flush;

  std::vector<int> grid;
  if (c.n_list.empty() && !c.n_max) {
    for (int N = 0; N <= w.levels.back().n; ++N) grid.push_back(N);
  } else {
    grid = c.n_grid();
  }
  const WitnessReport rep = witness_report(w, xs, grid);
  progress << "witness: report done\n" << std::flush;
  json doc;
  doc["witness"] = to_json(w);
  doc["report"] = to_json(rep);
  return doc;
}

Table witness_table(const nlohmann::json& doc) {
  Table t{{"x", "max_cesaro", "max_riesz"}, {}, {}};
  const auto& levels = doc.at("witness").at("levels");
  for (const auto& l : levels) t.columns.push_back(fmt::format("max_cesaro_upto_n{}", l.at("k").get<int>()));
  for (const auto& s : doc.at("report").at("samples")) {
    std::vector<json> row{s.at("x"), s.at("max_cesaro"), s.at("max_riesz")};
    for (const auto& v : s.at("level_max_cesaro")) row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  const auto& rho = doc.at("report").at("rho");
  for (std::size_t k = 0; k < rho.size(); ++k) {
    t.trailer.emplace_back(fmt::format("n_{}", k + 1), levels.at(k).at("n"));
    t.trailer.emplace_back(fmt::format("rho_{}", k + 1), rho.at(k));
  }
  t.trailer.emplace_back("lacunarity", doc.at("witness").at("lacunarity"));
  t.trailer.emplace_back("bound_violation", doc.at("report").at("bound_violation"));
  return t;
}

Table cmd_cantor_lebesgue(const RunConfig& c) {
  const FamilySpec f = family_of(c);
  if (!f.is_jacobi()) throw std::invalid_argument("cantor-lebesgue runs on the Jacobi family (theta domain)");
  IntervalSet E;
  for (const std::string& part : split(c.intervals, ',')) {
    const auto ab = split(part, ':');
    if (ab.size() != 2) throw std::invalid_argument("--intervals expects a:b[,c:d...]");
    E.intervals.push_back({parse_double(ab[0]), parse_double(ab[1])});
  }
  E.validate();
  for (const Interval& iv : E.intervals) {
    if (!(iv.lo > 0.0 && iv.hi < std::numbers::pi)) throw std::domain_error("theta intervals must lie in (0, pi)");
  }
  const std::vector<int> ns = c.n_grid();
  for (int n : ns) {
    if (n < 1) throw std::out_of_range("cantor-lebesgue needs n >= 1");
  }
  // √n P_n(cos θ) has amplitude k(θ), so the estimate targets the quadratic mean of k on E.
  const int top = max_of(ns);
  auto F = [&](int n, double theta) { return std::sqrt(static_cast<double>(n)) * jacobi_eval(f, n, std::cos(theta)); };
  const Eigen::VectorXd est = cantor_lebesgue_estimate(F, E, ns, {c.tol, 1e-14, 20});
  auto k2 = [&](double theta) {
    const double k = jacobi_main_term(f, 1, theta).amplitude;
    return k * k;
  };
  double mean = 0.0;
  for (const Interval& iv : E.intervals) mean += integrate_adaptive(JacobiMeasure{0.0, 0.0}, std::vector<Segment>{{iv.lo, iv.hi, 0.0, 0.0}}, 0, k2, {1e-12, 1e-300, 20});
  const double target = std::sqrt(mean / E.measure());
  Table t{{"n", "estimate", "target", "relative_error"}, {}, {}};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double e = est[static_cast<Eigen::Index>(i)];
    t.rows.push_back({ns[i], cell(e), cell(target), cell(std::abs(e - target) / target)});
  }
  t.trailer.emplace_back("set_measure", cell(E.measure()));
  t.trailer.emplace_back("top_degree", top);
  return t;
}

Table cmd_critical(const RunConfig& c) {
  Table t{{"quantity", "value"}, {}, {}};
  if (c.family == "jacobi") {
    FamilySpec::jacobi(c.alpha, c.beta).require_theorem_range();
    const CriticalIndices ci = critical_indices(c.alpha);
    t.rows.push_back({"p_c", cell(ci.p_c)});
    t.rows.push_back({"p_c_conj", cell(ci.p_c_conj)});
    if (c.p) t.rows.push_back({"jacobi_delta_bound", cell(jacobi_delta_bound(c.alpha, *c.p))});
  } else if (c.family == "laguerre") {
    FamilySpec::laguerre(c.alpha);
    t.rows.push_back({"p_lower", 4.0});
    if (c.p) t.rows.push_back({"laguerre_delta_bound", cell(laguerre_delta_bound(*c.p))});
  } else {
    family_of(c);
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_cell(const json& v) {
  if (v.is_null()) return "nan";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return num(v.get<double>());
  return v.dump();
}

void write_header(std::ostream& os, const RunConfig& c) {
  os << "# ortholab " << ORTHOLAB_VERSION << "\n";
  for (const auto& [k, v] : c.echo()) os << "# " << k << " = " << v << "\n";
}

json header_json(const RunConfig& c) {
  json h;
  h["tool"] = "ortholab";
  h["version"] = ORTHOLAB_VERSION;
  json params = json::object();
  for (const auto& [k, v] : c.echo()) params[k] = v;
  h["parameters"] = params;
  return h;
}

}  // namespace

void write_csv(std::ostream& os, const RunConfig& c, const Table& t) {
  write_header(os, c);
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  for (const auto& [k, v] : t.trailer) os << "# " << k << " = " << csv_cell(v) << "\n";
}

void write_json(std::ostream& os, const RunConfig& c, const Table& t) {
  json doc;
  doc["header"] = header_json(c);
  doc["columns"] = t.columns;
  doc["rows"] = t.rows;
  json trailer = json::object();
  for (const auto& [k, v] : t.trailer) trailer[k] = v;
  doc["summary"] = trailer;
  os << doc.dump(2) << "\n";
}

namespace {

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--family", c.family, "jacobi or laguerre")->capture_default_str();
  sub->add_option("--alpha", c.alpha)->capture_default_str();
  sub->add_option("--beta", c.beta)->capture_default_str();
  sub->add_option("--tol", c.tol, "relative quadrature tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::Csv}, {"json", Format::Json}}));
}

void add_n(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n", c.n_list, "explicit degrees")->delimiter(',');
  sub->add_option("--n-min", c.n_min);
  sub->add_option("--n-max", c.n_max);
  sub->add_option("--n-step", c.n_step)->capture_default_str();
  sub->add_option("--n-geom", c.n_geom, "number of geometric grid points between n-min and n-max");
}

void add_x(CLI::App* sub, RunConfig& c) {
  sub->add_option("--x", c.x_list, "explicit points")->delimiter(',');
  sub->add_option("--x-grid", c.x_grid, "lo:hi:count");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Numerical companion for Cesaro and Riesz summability of Jacobi and Laguerre expansions", "ortholab"};
  app.set_version_flag("--version", std::string(ORTHOLAB_VERSION));
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "evaluate P_n or L_n with the asymptotic main term");
  add_common(eval, c);
  add_n(eval, c);
  add_x(eval, c);

  auto* scan = app.add_subcommand("normscan", "weighted norm growth scan with slope fit");
  add_common(scan, c);
  add_n(scan, c);
  scan->add_option("--q", c.q)->capture_default_str();
  scan->add_option("--r", c.r)->capture_default_str();

  auto* sum = app.add_subcommand("sum", "Cesaro, Riesz and partial sums of a test function");
  add_common(sum, c);
  add_n(sum, c);
  add_x(sum, c);
  sum->add_option("--delta", c.delta)->capture_default_str();
  sum->add_option("--function", c.function, "one, x3, abs, step (Jacobi); exp, step, hump (Laguerre)")
      ->capture_default_str();

  auto* wit = app.add_subcommand("witness", "build a divergence witness and report its means");
  add_common(wit, c);
  add_n(wit, c);
  add_x(wit, c);
  wit->add_option("--p", c.p)->required();
  wit->add_option("--delta", c.delta)->required();
  wit->add_option("--levels", c.levels)->capture_default_str();

  auto* cl = app.add_subcommand("cantor-lebesgue", "amplitude recovery from mean squares on theta intervals");
  add_common(cl, c);
  add_n(cl, c);
  cl->add_option("--intervals", c.intervals, "theta intervals a:b[,c:d...]")->capture_default_str();

  auto* crit = app.add_subcommand("critical", "critical indices and delta bounds");
  add_common(crit, c);
  crit->add_option("--p", c.p);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ORTHOLAB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    Table table;
    json doc;
    bool is_doc = false;
    if (c.command == "eval") {
      table = cmd_eval(c);
    } else if (c.command == "normscan") {
      table = cmd_normscan(c, err);
    } else if (c.command == "sum") {
      table = cmd_sum(c);
    } else if (c.command == "witness") {
      doc = cmd_witness(c, err);
      if (c.format == Format::Csv) {
        table = witness_table(doc);
      } else {
        is_doc = true;
      }
    } else if (c.command == "cantor-lebesgue") {
      table = cmd_cantor_lebesgue(c);
    } else {
      table = cmd_critical(c);
    }

    std::ofstream file;
    std::ostream* os = &out;
    if (!c.out.empty()) {
      file.open(c.out);
      if (!file) {
        err << "error: cannot open " << c.out << " for writing\n";
        return kExitInvalid;
      }
      os = &file;
    }
    if (is_doc) {
      json full;
      full["header"] = header_json(c);
      full["witness"] = doc["witness"];
      full["report"] = doc["report"];
      *os << full.dump(2) << "\n";
    } else if (c.format == Format::Json) {
      write_json(*os, c, table);
    } else {
      write_csv(*os, c, table);
    }
    return kExitOk;
  } catch (const WitnessBuildFailure& e) {
    err << "numerical failure: " << e.what();
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace ortholab::cli
