#ifndef PSCOM_CLI_HPP
#define PSCOM_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pscom/experiments.hpp"
#include "pscom/solvers.hpp"

namespace pscom::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInfeasible = 2,
  kIoError = 3,
  kOracleViolation = 4,
};

inline constexpr double kMethod2WarnCandidates = 1e6;
inline constexpr double kMethod2MaxCandidates = 1e8;

enum class Subcommand { Solve, Sweep, OracleCheck };

struct CliInvocation {
  Subcommand subcommand = Subcommand::Solve;
  std::filesystem::path config_path;
  std::filesystem::path output_dir = "out";
  std::optional<std::vector<Method>> methods;
  std::optional<SweepParameter> sweep_param;
  std::vector<double> sweep_values;
  std::optional<std::size_t> grid_points;
  bool force = false;
  bool timing = false;
  unsigned jobs = 0;
};

int cmd_solve(const CliInvocation& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliInvocation& args, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const CliInvocation& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace pscom::cli

#endif  // PSCOM_CLI_HPP
