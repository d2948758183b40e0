#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nhdkr/dynamics.hpp"
#include "nhdkr/invariants.hpp"
#include "nhdkr/lattice.hpp"

namespace nhdkr::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum class OutputFormat { Csv, Json };
enum class ObcMode { Count, Spectrum };

/// Everything a run depends on. An unset grid means the command's own default.
struct RunConfig {
  std::string command;
  std::string preset;
  double u1 = 0.0, v1 = 0.0, u2 = 0.0, v2 = 0.0;
  std::vector<AxisSpec> axes;
  bool lock_u = false;
  bool lock_v = false;
  std::optional<std::size_t> grid;
  int t = dynamics::kDefaultPeriods;
  std::size_t N = lattice::kDefaultCells;
  double gap_tol = bloch::kDefaultGapTol;
  double pin_tol = lattice::kDefaultPinTol;
  double ipr_tol = lattice::kDefaultIprTol;
  EdgeCountOptions::Rule edge_rule = EdgeCountOptions::Rule::Gap;
  ObcMode obc_mode = ObcMode::Count;
  McdMethod mcd_method = McdMethod::ClosedForm;
  TransitionAxis transition_axis = TransitionAxis::V2;
  int n_max = 10;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;  // empty: standard output
  unsigned threads = 0;

  ModelParams params() const { return ModelParams(u1, v1, u2, v2); }
  ScanSpec scan() const;
  std::size_t grid_or(std::size_t fallback) const { return grid.value_or(fallback); }
  /// Throws InvalidParams describing the first problem found.
  void validate() const;
  /// Key/value echo of every field, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Numeric table plus an optional leading text column (used by verify).
struct ResultTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::string label_column;
  std::vector<std::string> labels;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool failed = false;  // verify: some check did not pass
};

ResultTable cmd_dispersion(const RunConfig& config);
ResultTable cmd_winding(const RunConfig& config);
ResultTable cmd_phase_diagram(const RunConfig& config);
ResultTable cmd_mcd(const RunConfig& config);
ResultTable cmd_obc(const RunConfig& config);
ResultTable cmd_transitions(const RunConfig& config);
ResultTable cmd_verify(const RunConfig& config);

/// Dispatches on config.command.
ResultTable run(const RunConfig& config);

/// Named figure reproductions: fig1 ... fig8.
RunConfig preset(std::string_view name);
std::vector<std::string_view> preset_names();

/// "5.5pi", "-0.5*pi", "pi" or a plain number in radians.
double parse_angle(std::string_view text);
/// "field:min:max:count".
AxisSpec parse_scan(std::string_view text);
/// "u1=u2", "v1=v2" or both separated by a comma; returns (lock_u, lock_v).
std::pair<bool, bool> parse_lock(std::string_view text);

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf".
std::string format_number(double x);

/// CSV body with a '#'-commented metadata header, or JSON {meta, columns, rows}.
/// The metadata block is the only part that may vary between identical runs.
std::string render(const ResultTable& table, OutputFormat format);

}  // namespace nhdkr::cli
