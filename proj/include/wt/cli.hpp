#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wt/density.hpp"
#include "wt/error.hpp"
#include "wt/io.hpp"
#include "wt/polygon.hpp"
#include "wt/symbol.hpp"

namespace wt {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Command {
  symbol_analyze,
  toeplitz_scan,
  polygon_generate,
  polygon_verify,
  wegner_run,
  ids_run,
  averaging_suite,
};

enum class OutputFormat { csv, json };

std::string_view to_string(Command c) noexcept;
std::optional<Command> command_from_string(std::string_view s) noexcept;

/// Fully materialized run description. Only the fields of `command` are
/// meaningful; the others keep their defaults and are not serialized.
struct ExperimentConfig {
  Command command = Command::symbol_analyze;
  std::uint64_t seed = 0;
  /// Empty means standard output.
  std::string output;
  OutputFormat format = OutputFormat::csv;

  std::optional<ConvolutionVector> vector;
  std::optional<PiecewisePolynomial> density;
  std::optional<LatticePolygon> polygon;

  std::size_t grid = 0;  // symbol-analyze; 0 until materialized
  std::string family = "cube";  // toeplitz-scan: cube | quarter-square | polygon
  int n_from = 2;
  int n_to = 16;
  int q = 3;
  std::vector<int> scales{1, 2, 3};
  double r = 1.4;
  double big_r = 2.0;

  std::size_t dim = 1;
  std::vector<int> ls{16};
  std::vector<double> eps{0.05, 0.1, 0.2, 0.4};
  double e = 0.0;
  std::size_t samples = 2000;
  double e_min = -4.0;
  double e_max = 4.0;
  std::size_t e_points = 81;

  std::size_t trials = 50;
};

/// Parses a JSON config. Input files named by string values of "vector",
/// "density" and "polygon" are read relative to `base_dir` and inlined.
/// Throws parse_error (with line and column) or validation_error (message
/// starts with the offending field name).
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");

/// The materialized config; parse_config of its dump gives the same config.
Json config_to_json(const ExperimentConfig& c);

struct RunResult {
  int exit_code = 0;
  std::string report;
  /// Machine-readable error record (JSON) when exit_code != 0.
  std::string error;
};

/// Executes the config and renders the report; nothing is written to disk.
/// Exit 0 on success, 1 on a computational error.
RunResult run(const ExperimentConfig& c);

/// Error record {"error": kind, "message": ..., "exit_code": n}.
std::string error_record(const Error& e, int exit_code);

}  // namespace wt
