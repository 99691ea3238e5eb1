#include <algorithm>
#include <cmath>
#include <random>

#include "pscom/config.hpp"

namespace pscom {

ChannelState generate_channel_gains(const RandomChannelSpec& spec) {
  if (!(spec.gain_min > 0.0) || !(spec.gain_max >= spec.gain_min) || !std::isfinite(spec.gain_max)) {
    throw ConfigError("channel.random", "need 0 < gain_min <= gain_max");
  }
  if (spec.n_users < 1) throw ConfigError("channel.random.n_users", "must be >= 1");

  Vector gains(static_cast<Eigen::Index>(spec.n_users));
  if (spec.gain_min == spec.gain_max) {
    gains.setConstant(spec.gain_min);
    return ChannelState(std::move(gains));
  }

  // Raw 64-bit draws keep the sequence identical across standard libraries.
  std::mt19937_64 engine(spec.seed);
  const double log_lo = std::log(spec.gain_min);
  const double log_span = std::log(spec.gain_max) - log_lo;
  for (Eigen::Index n = 0; n < gains.size(); ++n) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    gains[n] = std::clamp(std::exp(log_lo + u * log_span), spec.gain_min, spec.gain_max);
  }
  return ChannelState(std::move(gains));
}

}  // namespace pscom
