#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace minclique::cli {

/// Everything one invocation was asked to do. Written verbatim into the
/// header of every emitted file so an output can be regenerated.
struct RunConfig {
  std::string command;
  std::optional<std::int64_t> n;
  std::optional<int> k;
  std::optional<std::string> graph;  // preset, edge list, or a path to a file holding one
  std::string dist = "uniform";
  std::optional<double> w;
  std::optional<double> z;  // w = z n^(-1/d)
  std::optional<double> observed;
  std::string tail = "lower";
  double alpha = 0.05;
  std::optional<int> grid_points;  // per-command default when absent
  double x_max = 3.0;              // grid extent in units of the asymptotic mean
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double delta = 1e-3;
  bool all_rows = false;  // table: the ten standard rows
  std::string format = "csv";
  std::string out;
  std::string samples_out;
  int digits = 50;
  bool force_guards = false;

  /// "key=value" pairs, space separated, unset optionals omitted.
  std::string describe() const;
};

enum ExitCode : int { kOk = 0, kInternal = 1, kValidity = 2, kQuadrature = 3 };

/// Parses arguments (argv[0] is the program name) and runs one command.
/// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 6 significant digits in scientific notation, e.g. 5.02780e-01.
std::string format_prob(double x);
/// Shortest text that parses back to the same double.
std::string format_exact(double x);

}  // namespace minclique::cli
