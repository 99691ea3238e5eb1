#ifndef PSCOM_EXPERIMENTS_HPP
#define PSCOM_EXPERIMENTS_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pscom/config.hpp"
#include "pscom/solvers.hpp"

namespace pscom {

/// A solver failed while running a scenario; the message leads with the
/// method name.
class SolverError : public std::runtime_error {
 public:
  SolverError(Method method, const std::string& what)
      : std::runtime_error(to_string(method) + ": " + what), method_(method) {}
  Method method() const { return method_; }

 private:
  Method method_;
};

/// Filesystem failure; the message names the path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct RunOptions {
  unsigned jobs = 0;
};

/// Every configured method on the same instance, in config order.
std::vector<SolveReport> run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

enum class SweepParameter { PMax, NUsers, NoisePower };

std::string to_string(SweepParameter p);
/// "pmax", "users", "noise" (case-insensitive).
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

/// Values are watts for PMax, user counts for NUsers and dBm for NoisePower.
struct SweepSpec {
  SweepParameter parameter = SweepParameter::PMax;
  std::vector<double> values;

  /// Throws ConfigError("sweep.values", ...) on empty, non-monotone, or
  /// non-integral user counts.
  void validate() const;
};

/// Copy of `config` with the swept parameter replaced.
ScenarioConfig apply_sweep_value(const ScenarioConfig& config, SweepParameter parameter, double value);

struct ResultRow {
  std::string scenario_id;
  std::optional<SweepParameter> sweep_param;
  double sweep_value = 0.0;
  Vector gains;
  SolveReport report;
};

/// Long format: one row per (scenario, method), in sweep order.
struct ResultTable {
  std::vector<ResultRow> rows;
  std::optional<SweepParameter> sweep_param;
};

ResultTable tabulate(const std::string& scenario_id, const ChannelState& channel,
                     const std::vector<SolveReport>& reports);

ResultTable run_sweep(const ScenarioConfig& config, const SweepSpec& sweep, const RunOptions& options = {});

struct ExportOptions {
  // Off by default so emitted files are reproducible; wall_ms is then 0.
  bool include_timing = false;
};

struct CsvPaths {
  std::filesystem::path summary;
  std::filesystem::path detail;
};

std::string summary_csv(const ResultTable& table, const ExportOptions& options = {});
std::string detail_csv(const ResultTable& table);

/// Writes summary.csv and detail.csv into `directory`, creating it if needed.
CsvPaths export_csv(const ResultTable& table, const std::filesystem::path& directory,
                    const ExportOptions& options = {});

/// SVG line chart of tau over the sweep, one polyline per method.
std::string render_svg(const ResultTable& table);
void emit_plot(const ResultTable& table, const std::filesystem::path& file);

/// Formats with 17 significant digits.
std::string format_number(double value);

}  // namespace pscom

#endif  // PSCOM_EXPERIMENTS_HPP
