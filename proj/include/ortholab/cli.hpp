#ifndef ORTHOLAB_CLI_HPP_
#define ORTHOLAB_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ortholab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

enum class Format { Auto, Csv, Json };

struct RunConfig {
  std::string command;
  std::string family = "jacobi";
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> p;
  double q = 2.0;
  double r = 0.0;
  double delta = 0.0;
  std::vector<int> n_list;
  std::optional<int> n_min, n_max;
  int n_step = 1;
  std::optional<int> n_geom;
  std::vector<double> x_list;
  std::string x_grid;  // "lo:hi:count"
  int levels = 6;
  double tol = 1e-10;
  std::string function = "one";
  std::string intervals = "0.5:1.2";  // θ intervals "a:b,c:d"
  std::string out;
  Format format = Format::Auto;

  std::vector<int> n_grid() const;
  std::vector<double> x_values() const;
  /// Every setting as (name, value) in a fixed order, for the output header.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Tabular result: named columns, rows of JSON scalars, and trailing key/value notes.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  std::vector<std::pair<std::string, nlohmann::json>> trailer;
};

Table cmd_eval(const RunConfig& c);
Table cmd_normscan(const RunConfig& c, std::ostream& progress);
Table cmd_sum(const RunConfig& c);
nlohmann::json cmd_witness(const RunConfig& c, std::ostream& progress);
Table witness_table(const nlohmann::json& doc);
Table cmd_cantor_lebesgue(const RunConfig& c);
Table cmd_critical(const RunConfig& c);

void write_csv(std::ostream& os, const RunConfig& c, const Table& t);
void write_json(std::ostream& os, const RunConfig& c, const Table& t);

/// Parses argv-style arguments (without the program name), runs the command and
/// returns the exit code. Results go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ortholab::cli

#endif  // ORTHOLAB_CLI_HPP_
