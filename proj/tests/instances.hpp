#ifndef PSCOM_TESTS_INSTANCES_HPP
#define PSCOM_TESTS_INSTANCES_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "pscom/config.hpp"
#include "pscom/model.hpp"

namespace pscom::testing {

struct Instance {
  ChannelState channel;
  SystemParams params;
};

// Instance `index` of a seeded family: N cycles through 1..4, P_max in
// [1, 10] W, noise in [-100, -80] dBm, gains log-uniform on [1e-10, 1e-8].
inline Instance seeded_instance(std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(index));
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  Instance inst;
  inst.params.p_max_w = uniform(1.0, 10.0);
  inst.params.noise_power_w = dbm_to_watt(uniform(-100.0, -80.0));
  RandomChannelSpec spec;
  spec.n_users = 1 + static_cast<std::size_t>(index % 4);
  spec.seed = rng();
  inst.channel = generate_channel_gains(spec);
  return inst;
}

}  // namespace pscom::testing

#endif  // PSCOM_TESTS_INSTANCES_HPP
