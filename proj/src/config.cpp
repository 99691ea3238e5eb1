#include "pscom/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pscom {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  return j;
}

double read_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

std::uint64_t read_unsigned(const json& obj, const std::string& key, const std::string& path,
                            std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(path + "." + key, "expected a non-negative integer");
}

SystemParams parse_system(const json& j) {
  require_object(j, "system");
  reject_unknown(j, "system",
                 {"bandwidth_hz", "noise_power_w", "noise_power_dbm", "p_max_w", "p0_w_per_load", "epsilon",
                  "m_beta_samples", "tau_lo_init", "tau_hi_init"});
  SystemParams p;
  p.bandwidth_hz = read_number(j, "bandwidth_hz", "system", p.bandwidth_hz);
  if (j.contains("noise_power_w") && j.contains("noise_power_dbm")) {
    throw ConfigError("system.noise_power_dbm", "give noise in either watts or dBm, not both");
  }
  if (j.contains("noise_power_dbm")) {
    p.noise_power_w = dbm_to_watt(read_number(j, "noise_power_dbm", "system", 0.0));
  } else {
    p.noise_power_w = read_number(j, "noise_power_w", "system", p.noise_power_w);
  }
  p.p_max_w = read_number(j, "p_max_w", "system", p.p_max_w);
  p.p0_w_per_load = read_number(j, "p0_w_per_load", "system", p.p0_w_per_load);
  p.epsilon = read_number(j, "epsilon", "system", p.epsilon);
  p.m_beta_samples = read_unsigned(j, "m_beta_samples", "system", p.m_beta_samples);
  p.tau_lo_init = read_number(j, "tau_lo_init", "system", p.tau_lo_init);
  p.tau_hi_init = read_number(j, "tau_hi_init", "system", p.tau_hi_init);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ConfigError("system." + msg.substr(0, colon), msg.substr(colon + 2));
  }
  return p;
}

ChannelSpec parse_channel(const json& j) {
  require_object(j, "channel");
  reject_unknown(j, "channel", {"gains", "random"});
  if (j.contains("gains") == j.contains("random")) {
    throw ConfigError("channel", "give exactly one of 'gains' or 'random'");
  }
  if (j.contains("gains")) {
    const json& g = j.at("gains");
    if (!g.is_array() || g.empty()) throw ConfigError("channel.gains", "expected a non-empty array");
    std::vector<double> gains;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string path = "channel.gains[" + std::to_string(i) + "]";
      if (!g[i].is_number()) throw ConfigError(path, "expected a number");
      const double v = g[i].get<double>();
      if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(path, "gain must be finite and > 0");
      gains.push_back(v);
    }
    return gains;
  }
  const json& r = require_object(j.at("random"), "channel.random");
  reject_unknown(r, "channel.random", {"n_users", "gain_min", "gain_max", "seed"});
  RandomChannelSpec spec;
  spec.n_users = read_unsigned(r, "n_users", "channel.random", spec.n_users);
  spec.gain_min = read_number(r, "gain_min", "channel.random", spec.gain_min);
  spec.gain_max = read_number(r, "gain_max", "channel.random", spec.gain_max);
  spec.seed = read_unsigned(r, "seed", "channel.random", spec.seed);
  if (spec.n_users < 1) throw ConfigError("channel.random.n_users", "must be >= 1");
  if (!(spec.gain_min > 0.0 && std::isfinite(spec.gain_min))) {
    throw ConfigError("channel.random.gain_min", "must be finite and > 0");
  }
  if (!(spec.gain_max >= spec.gain_min && std::isfinite(spec.gain_max))) {
    throw ConfigError("channel.random.gain_max", "must be finite and >= gain_min");
  }
  return spec;
}

std::vector<Knot> parse_curve(const json& j) {
  require_object(j, "curve");
  reject_unknown(j, "curve", {"knots"});
  if (!j.contains("knots")) throw ConfigError("curve.knots", "missing");
  const json& k = j.at("knots");
  if (!k.is_array()) throw ConfigError("curve.knots", "expected an array of [eta, load] pairs");
  std::vector<Knot> knots;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const std::string path = "curve.knots[" + std::to_string(i) + "]";
    if (!k[i].is_array() || k[i].size() != 2 || !k[i][0].is_number() || !k[i][1].is_number()) {
      throw ConfigError(path, "expected [eta, load]");
    }
    knots.push_back({k[i][0].get<double>(), k[i][1].get<double>()});
  }
  try {
    CompLoadCurve::from_knots(knots);
  } catch (const CurveValidationError& e) {
    throw ConfigError("curve.knots", e.what());
  }
  return knots;
}

std::vector<Method> parse_methods(const json& j) {
  if (!j.is_array()) throw ConfigError("methods", "expected an array of method names");
  if (j.empty()) throw ConfigError("methods", "at least one method is required");
  std::vector<Method> methods;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "methods[" + std::to_string(i) + "]";
    if (!j[i].is_string()) throw ConfigError(path, "expected a string");
    const auto m = parse_method(j[i].get<std::string>());
    if (!m) throw ConfigError(path, "unknown method '" + j[i].get<std::string>() + "'");
    if (std::find(methods.begin(), methods.end(), *m) != methods.end()) {
      throw ConfigError(path, "duplicate method '" + j[i].get<std::string>() + "'");
    }
    methods.push_back(*m);
  }
  return methods;
}

std::string config_name(Method m) {
  switch (m) {
    case Method::Method1: return "method1";
    case Method::Method2: return "method2";
    case Method::EqualPower: return "equal_power";
    case Method::NonSemantic: return "non_semantic";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

}  // namespace

ChannelState ScenarioConfig::build_channel() const {
  if (const auto* gains = std::get_if<std::vector<double>>(&channel)) return ChannelState(*gains);
  return generate_channel_gains(std::get<RandomChannelSpec>(channel));
}

CompLoadCurve ScenarioConfig::build_curve() const { return CompLoadCurve::from_knots(knots); }

std::size_t ScenarioConfig::n_users() const {
  if (const auto* gains = std::get_if<std::vector<double>>(&channel)) return gains->size();
  return std::get<RandomChannelSpec>(channel).n_users;
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "expected a JSON object");
  reject_unknown(root, "", {"system", "channel", "curve", "methods", "oracle", "method2_shared_eta"});

  ScenarioConfig config;
  if (root.contains("system")) config.system = parse_system(root.at("system"));
  if (root.contains("channel")) config.channel = parse_channel(root.at("channel"));
  if (root.contains("curve")) config.knots = parse_curve(root.at("curve"));
  if (root.contains("methods")) config.methods = parse_methods(root.at("methods"));
  if (root.contains("oracle")) {
    const json& o = require_object(root.at("oracle"), "oracle");
    reject_unknown(o, "oracle", {"grid_points_per_segment"});
    config.oracle_grid_points = read_unsigned(o, "grid_points_per_segment", "oracle", config.oracle_grid_points);
  }
  if (root.contains("method2_shared_eta")) {
    if (!root.at("method2_shared_eta").is_boolean()) throw ConfigError("method2_shared_eta", "expected a boolean");
    config.method2_shared_eta = root.at("method2_shared_eta").get<bool>();
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  json root;
  const SystemParams& s = config.system;
  root["system"] = {{"bandwidth_hz", s.bandwidth_hz},   {"noise_power_w", s.noise_power_w},
                    {"p_max_w", s.p_max_w},             {"p0_w_per_load", s.p0_w_per_load},
                    {"epsilon", s.epsilon},             {"m_beta_samples", s.m_beta_samples},
                    {"tau_lo_init", s.tau_lo_init},     {"tau_hi_init", s.tau_hi_init}};
  if (const auto* gains = std::get_if<std::vector<double>>(&config.channel)) {
    root["channel"] = {{"gains", *gains}};
  } else {
    const auto& r = std::get<RandomChannelSpec>(config.channel);
    root["channel"] = {{"random",
                        {{"n_users", r.n_users}, {"gain_min", r.gain_min}, {"gain_max", r.gain_max}, {"seed", r.seed}}}};
  }
  json knots = json::array();
  for (const Knot& k : config.knots) knots.push_back({k.eta, k.load});
  root["curve"] = {{"knots", knots}};
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(config_name(m));
  root["methods"] = methods;
  root["oracle"] = {{"grid_points_per_segment", config.oracle_grid_points}};
  root["method2_shared_eta"] = config.method2_shared_eta;
  return root.dump(2) + "\n";
}

}  // namespace pscom
