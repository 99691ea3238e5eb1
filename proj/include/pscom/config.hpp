#ifndef PSCOM_CONFIG_HPP
#define PSCOM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pscom/curve.hpp"
#include "pscom/model.hpp"
#include "pscom/solvers.hpp"

namespace pscom {

/// Rejected configuration; `field_path()` is the dotted path of the field,
/// e.g. "system.p_max_w" or "curve.knots".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

/// Log-uniform random gains drawn from a seeded generator.
struct RandomChannelSpec {
  std::size_t n_users = 3;
  double gain_min = 1e-10;
  double gain_max = 1e-8;
  std::uint64_t seed = 42;

  bool operator==(const RandomChannelSpec&) const = default;
};

using ChannelSpec = std::variant<std::vector<double>, RandomChannelSpec>;

struct ScenarioConfig {
  SystemParams system;
  ChannelSpec channel = RandomChannelSpec{};
  std::vector<Knot> knots = CompLoadCurve::default_curve().knots();
  std::vector<Method> methods = {Method::Method1, Method::Method2, Method::EqualPower,
                                 Method::NonSemantic};
  std::size_t oracle_grid_points = 25;
  bool method2_shared_eta = false;

  ChannelState build_channel() const;
  CompLoadCurve build_curve() const;
  std::size_t n_users() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the JSON scenario format. Omitted fields keep their defaults;
/// unknown fields are rejected. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form; noise is written in watts.
std::string serialize_config(const ScenarioConfig& config);

/// n_users gains, log-uniform on [gain_min, gain_max]. The draw for k users
/// is a prefix of the draw for any larger count with the same seed.
ChannelState generate_channel_gains(const RandomChannelSpec& spec);

}  // namespace pscom

#endif  // PSCOM_CONFIG_HPP
