#include "pscom/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace pscom::cli {
namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    items.push_back(cur);
  }
  return items;
}

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// Loads the config and applies the method filter. Returns nullopt after
// reporting the problem on `err`.
std::optional<ScenarioConfig> load(const CliInvocation& args, std::ostream& err) {
  try {
    ScenarioConfig config = load_config(args.config_path);
    if (args.methods) {
      if (args.methods->empty()) throw ConfigError("--method", "at least one method is required");
      config.methods = *args.methods;
    }
    if (args.grid_points) config.oracle_grid_points = *args.grid_points;
    return config;
  } catch (const ConfigError& e) {
    err << "error: invalid config: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
  }
  return std::nullopt;
}

// Method-2 enumeration size and oracle user bound. Returns true if the run
// may proceed.
bool check_workload(const ScenarioConfig& config, std::size_t max_users, bool force, std::ostream& err) {
  const auto has = [&](Method m) {
    return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end();
  };
  if (has(Method::Method2)) {
    const double count = method2_candidate_count(config.build_curve(), max_users, config.method2_shared_eta);
    if (count > kMethod2MaxCandidates && !force) {
      err << "error: Method2 would enumerate " << sci(count) << " candidate eta vectors (limit "
          << sci(kMethod2MaxCandidates) << "); pass --force to run anyway\n";
      return false;
    }
    if (count > kMethod2WarnCandidates) {
      err << "warning: Method2 enumerates " << sci(count) << " candidate eta vectors\n";
    }
  }
  if (has(Method::Oracle) && max_users > kOracleMaxUsers) {
    err << "error: oracle supports at most " << kOracleMaxUsers << " users, config has " << max_users << "\n";
    return false;
  }
  return true;
}

void print_report(std::ostream& out, const std::string& prefix, const SolveReport& r) {
  out << prefix << to_string(r.method) << "  tau=" << sci(r.tau_bps()) << " bit/s  total_power="
      << sci(total_power(r.allocation)) << " W  feasible=" << (r.feasible ? "yes" : "no")
      << "  wall=" << sci(r.wall_ms) << " ms\n";
}

}  // namespace

int cmd_solve(const CliInvocation& args, std::ostream& out, std::ostream& err) {
  const auto config = load(args, err);
  if (!config) return kConfigError;
  if (!check_workload(*config, config->n_users(), args.force, err)) return kConfigError;

  std::vector<SolveReport> reports;
  ChannelState channel;
  try {
    channel = config->build_channel();
    reports = run_scenario(*config, RunOptions{args.jobs});
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  const ResultTable table = tabulate("base", channel, reports);
  try {
    const CsvPaths paths = export_csv(table, args.output_dir, ExportOptions{args.timing});
    err << "wrote " << paths.summary.string() << " and " << paths.detail.string() << "\n";
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  bool all_feasible = true;
  for (const SolveReport& r : reports) {
    print_report(out, "", r);
    all_feasible = all_feasible && r.feasible;
  }
  if (!all_feasible) {
    err << "error: at least one method found no feasible allocation\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_sweep(const CliInvocation& args, std::ostream& out, std::ostream& err) {
  if (!args.sweep_param) {
    err << "error: sweep requires --param {pmax|users|noise}\n";
    return kConfigError;
  }
  const SweepSpec sweep{*args.sweep_param, args.sweep_values};
  try {
    sweep.validate();
  } catch (const ConfigError& e) {
    err << "error: invalid sweep: " << e.what() << "\n";
    return kConfigError;
  }
  const auto config = load(args, err);
  if (!config) return kConfigError;

  std::size_t max_users = config->n_users();
  if (sweep.parameter == SweepParameter::NUsers) {
    max_users = static_cast<std::size_t>(*std::max_element(sweep.values.begin(), sweep.values.end()));
  }
  if (!check_workload(*config, max_users, args.force, err)) return kConfigError;

  ResultTable table;
  try {
    table = run_sweep(*config, sweep, RunOptions{args.jobs});
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    const CsvPaths paths = export_csv(table, args.output_dir, ExportOptions{args.timing});
    const auto svg = args.output_dir / ("sweep_" + to_string(sweep.parameter) + ".svg");
    emit_plot(table, svg);
    err << "wrote " << paths.summary.string() << ", " << paths.detail.string() << " and " << svg.string() << "\n";
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  bool all_feasible = true;
  for (const ResultRow& row : table.rows) {
    print_report(out, to_string(sweep.parameter) + "=" + format_number(row.sweep_value) + "  ", row.report);
    all_feasible = all_feasible && row.report.feasible;
  }
  if (!all_feasible) {
    err << "error: at least one sweep point has no feasible allocation\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_oracle_check(const CliInvocation& args, std::ostream& out, std::ostream& err) {
  auto config = load(args, err);
  if (!config) return kConfigError;
  const std::size_t n_users = config->n_users();
  if (n_users > kOracleMaxUsers) {
    err << "error: oracle-check supports at most " << kOracleMaxUsers << " users, config has " << n_users << "\n";
    return kConfigError;
  }

  SolveReport m1, m2, oracle, knots_only;
  try {
    const ChannelState channel = config->build_channel();
    const CompLoadCurve curve = config->build_curve();
    SolveOptions opts;
    opts.jobs = args.jobs;
    m1 = solve_method1(channel, curve, config->system, opts);
    m2 = solve_method2(channel, curve, config->system, opts);
    oracle = solve_oracle(channel, curve, config->system, config->oracle_grid_points, opts);
    knots_only = config->oracle_grid_points == 0 ? oracle : solve_oracle(channel, curve, config->system, 0, opts);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  const double eps = config->system.epsilon;
  const double best_method = std::max(m1.tau_bps(), m2.tau_bps());
  const double knots_gap = std::abs(knots_only.tau_bps() - m2.tau_bps());
  const double knots_rel = m2.tau_bps() > 0 ? knots_gap / m2.tau_bps() : knots_gap;
  const bool dominates = oracle.tau_bps() >= best_method - eps;
  const bool knots_match = knots_rel <= 1e-9;

  out << "grid_points_per_segment=" << config->oracle_grid_points << "\n";
  out << "tau_method1=" << format_number(m1.tau_bps()) << "\n";
  out << "tau_method2=" << format_number(m2.tau_bps()) << "\n";
  out << "tau_oracle=" << format_number(oracle.tau_bps()) << "\n";
  out << "tau_oracle_knots_only=" << format_number(knots_only.tau_bps()) << "\n";
  out << "gap_oracle_minus_method1=" << format_number(oracle.tau_bps() - m1.tau_bps()) << "\n";
  out << "gap_oracle_minus_method2=" << format_number(oracle.tau_bps() - m2.tau_bps()) << "\n";
  out << "knots_only_relative_diff=" << format_number(knots_rel) << "\n";
  out << "oracle_dominates=" << (dominates ? "yes" : "no") << "\n";
  out << "knots_only_matches_method2=" << (knots_match ? "yes" : "no") << "\n";

  if (!dominates || !knots_match) {
    err << "error: oracle check violated\n";
    return kOracleViolation;
  }
  return kOk;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Max-min fair power allocation for semantic-compression uplinks", "pscom"};
  app.require_subcommand(1);

  CliInvocation inv;
  std::string method_list;
  std::string param_name;
  std::string values_list;
  std::size_t grid_points = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", inv.config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", inv.output_dir, "Output directory")->capture_default_str();
    sub->add_option("--method", method_list, "Comma-separated methods (default: all except oracle)");
    sub->add_option("--jobs", inv.jobs, "Parallelism degree (default: PSCOM_JOBS or 1)");
    sub->add_flag("--force", inv.force, "Allow very large Method2 enumerations");
    sub->add_flag("--timing", inv.timing, "Write wall-clock times into the CSVs (breaks reproducibility)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Run every method on one scenario");
  add_common(solve);
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter and plot tau");
  add_common(sweep);
  sweep->add_option("--param", param_name, "pmax | users | noise")->required();
  sweep->add_option("--values", values_list, "Comma-separated sweep values")->required();
  CLI::App* oracle = app.add_subcommand("oracle-check", "Compare both methods with the brute-force oracle");
  add_common(oracle);
  CLI::Option* grid_opt = oracle->add_option("--grid-points", grid_points, "Oracle points per segment (0: knots only)");

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (!method_list.empty()) {
    std::vector<Method> methods;
    for (const std::string& name : split_list(method_list)) {
      const auto m = parse_method(name);
      if (!m) {
        err << "error: --method: unknown method '" << name << "'\n";
        return kConfigError;
      }
      if (std::find(methods.begin(), methods.end(), *m) == methods.end()) methods.push_back(*m);
    }
    inv.methods = methods;
  }
  if (grid_opt->count() > 0) inv.grid_points = grid_points;

  if (solve->parsed()) {
    inv.subcommand = Subcommand::Solve;
    return cmd_solve(inv, out, err);
  }
  if (sweep->parsed()) {
    inv.subcommand = Subcommand::Sweep;
    inv.sweep_param = parse_sweep_parameter(param_name);
    if (!inv.sweep_param) {
      err << "error: --param: expected pmax, users or noise, got '" << param_name << "'\n";
      return kConfigError;
    }
    for (const std::string& item : split_list(values_list)) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
        err << "error: --values: '" << item << "' is not a number\n";
        return kConfigError;
      }
      inv.sweep_values.push_back(v);
    }
    return cmd_sweep(inv, out, err);
  }
  inv.subcommand = Subcommand::OracleCheck;
  return cmd_oracle_check(inv, out, err);
}

}  // namespace pscom::cli
