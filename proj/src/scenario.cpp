#include <cctype>
#include <cmath>
#include <string>

#include "pscom/experiments.hpp"

namespace pscom {

std::vector<SolveReport> run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  if (config.methods.empty()) throw ConfigError("methods", "at least one method is required");
  config.system.validate();
  const ChannelState channel = config.build_channel();
  const CompLoadCurve curve = config.build_curve();
  SolveOptions solve;
  solve.jobs = options.jobs;
  solve.method2_shared_eta = config.method2_shared_eta;

  std::vector<SolveReport> reports;
  reports.reserve(config.methods.size());
  for (Method m : config.methods) {
    try {
      switch (m) {
        case Method::Method1: reports.push_back(solve_method1(channel, curve, config.system, solve)); break;
        case Method::Method2: reports.push_back(solve_method2(channel, curve, config.system, solve)); break;
        case Method::EqualPower: reports.push_back(solve_equal_power(channel, curve, config.system)); break;
        case Method::NonSemantic: reports.push_back(solve_non_semantic(channel, config.system)); break;
        case Method::Oracle:
          reports.push_back(solve_oracle(channel, curve, config.system, config.oracle_grid_points, solve));
          break;
      }
    } catch (const std::exception& e) {
      throw SolverError(m, e.what());
    }
  }
  return reports;
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::PMax: return "pmax";
    case SweepParameter::NUsers: return "users";
    case SweepParameter::NoisePower: return "noise";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "pmax") return SweepParameter::PMax;
  if (key == "users" || key == "nusers") return SweepParameter::NUsers;
  if (key == "noise" || key == "noisepower") return SweepParameter::NoisePower;
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep.values", "at least one value is required");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep.values", "values must be finite");
  }
  if (values.size() > 1) {
    const bool increasing = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
      const bool ok = increasing ? values[i] > values[i - 1] : values[i] < values[i - 1];
      if (!ok) throw ConfigError("sweep.values", "values must be strictly monotone");
    }
  }
  for (double v : values) {
    if (parameter == SweepParameter::NUsers && !(v >= 1.0 && v == std::floor(v))) {
      throw ConfigError("sweep.values", "user counts must be positive integers");
    }
    if (parameter == SweepParameter::PMax && !(v > 0.0)) {
      throw ConfigError("sweep.values", "maximum power must be > 0");
    }
  }
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& config, SweepParameter parameter, double value) {
  ScenarioConfig out = config;
  switch (parameter) {
    case SweepParameter::PMax: out.system.p_max_w = value; break;
    case SweepParameter::NoisePower: out.system.noise_power_w = dbm_to_watt(value); break;
    case SweepParameter::NUsers: {
      const auto count = static_cast<std::size_t>(value);
      if (auto* random = std::get_if<RandomChannelSpec>(&out.channel)) {
        random->n_users = count;
      } else {
        auto& gains = std::get<std::vector<double>>(out.channel);
        if (count > gains.size()) {
          throw ConfigError("channel.gains", "sweep asks for " + std::to_string(count) + " users but only " +
                                                 std::to_string(gains.size()) + " gains are listed");
        }
        gains.resize(count);
      }
      break;
    }
  }
  return out;
}

ResultTable tabulate(const std::string& scenario_id, const ChannelState& channel,
                     const std::vector<SolveReport>& reports) {
  ResultTable table;
  for (const SolveReport& r : reports) table.rows.push_back({scenario_id, std::nullopt, 0.0, channel.gains(), r});
  return table;
}

ResultTable run_sweep(const ScenarioConfig& config, const SweepSpec& sweep, const RunOptions& options) {
  sweep.validate();
  ResultTable table;
  table.sweep_param = sweep.parameter;
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const ScenarioConfig point = apply_sweep_value(config, sweep.parameter, sweep.values[i]);
    const ChannelState channel = point.build_channel();
    const std::string id = to_string(sweep.parameter) + "_" + std::to_string(i);
    for (SolveReport& r : run_scenario(point, options)) {
      table.rows.push_back({id, sweep.parameter, sweep.values[i], channel.gains(), std::move(r)});
    }
  }
  return table;
}

}  // namespace pscom
