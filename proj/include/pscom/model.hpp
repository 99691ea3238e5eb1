#ifndef PSCOM_MODEL_HPP
#define PSCOM_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pscom {

using Vector = Eigen::VectorXd;

// Relative slack applied to every power-budget comparison.
inline constexpr double kBudgetSlack = 1e-9;

/// Global constants of one uplink instance. Powers are in watts; dBm only
/// exists at the config boundary.
struct SystemParams {
  double bandwidth_hz = 1e7;
  double noise_power_w = 1e-12;
  double p_max_w = 6.0;
  double p0_w_per_load = 1e-3;
  double epsilon = 1e-4;
  std::size_t m_beta_samples = 500;
  double tau_lo_init = 1e-3;
  double tau_hi_init = 1e10;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  /// Budget limit used by every feasibility comparison.
  double budget_limit() const { return p_max_w * (1.0 + kBudgetSlack); }

  bool operator==(const SystemParams&) const = default;
};

/// Per-user linear channel power gains.
class ChannelState {
 public:
  ChannelState() = default;
  explicit ChannelState(Vector gains);
  explicit ChannelState(const std::vector<double>& gains);

  const Vector& gains() const { return gains_; }
  Eigen::Index size() const { return gains_.size(); }
  double operator[](Eigen::Index n) const { return gains_[n]; }

  /// Sum of inverse gains, the denominator of the received-power split.
  double inverse_gain_sum() const { return gains_.cwiseInverse().sum(); }

  /// First `count` users of this channel.
  ChannelState prefix(Eigen::Index count) const;

 private:
  Vector gains_;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Shannon capacity B log2(1 + p h / sigma^2) in bit/s.
template <typename Scalar>
Scalar channel_capacity(Scalar p_t, Scalar h, const SystemParams& params) {
  if (!(p_t >= Scalar(0))) throw std::domain_error("channel_capacity: negative transmit power");
  if (!(h > Scalar(0))) throw std::domain_error("channel_capacity: channel gain must be positive");
  using std::log1p;
  const Scalar snr = p_t * h / Scalar(params.noise_power_w);
  return Scalar(params.bandwidth_hz) * log1p(snr) / Scalar(std::numbers::ln2);
}

/// Rate delivered after decompression: capacity / eta.
template <typename Scalar>
Scalar equivalent_rate(Scalar capacity, Scalar eta) {
  if (!(eta > Scalar(0))) throw std::domain_error("equivalent_rate: compression ratio must be positive");
  if (!(capacity >= Scalar(0))) throw std::domain_error("equivalent_rate: negative capacity");
  return capacity / eta;
}

/// Per-user capacities for a whole transmit-power vector.
template <typename Derived>
Vector channel_capacities(const Eigen::MatrixBase<Derived>& p_t, const ChannelState& channel,
                          const SystemParams& params) {
  Vector out(p_t.size());
  for (Eigen::Index n = 0; n < p_t.size(); ++n) out[n] = channel_capacity(p_t[n], channel[n], params);
  return out;
}

class CompLoadCurve;

/// Joint decision for all users plus its derived quantities.
struct Allocation {
  Vector eta;
  Vector p_t_w;
  Vector p_c_w;
  Vector rates_bps;
  double tau_bps = 0.0;

  Eigen::Index size() const { return eta.size(); }
};

/// Builds an allocation from (eta, p_t), deriving computation power, rates
/// and the minimum rate. This is the only place derived fields are computed.
Allocation make_allocation(const Vector& eta, const Vector& p_t_w, const ChannelState& channel,
                           const CompLoadCurve& curve, const SystemParams& params);

/// Sum over users of transmit plus computation power.
double total_power(const Allocation& alloc);

enum class Constraint { TotalPower, TransmitPowerSign, CompressionRange, Shape };

struct Violation {
  Constraint constraint;
  // Offending user; npos for whole-allocation constraints.
  std::size_t user = npos;
  double value = 0.0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct FeasibilityResult {
  bool feasible = true;
  std::vector<Violation> violations;

  explicit operator bool() const { return feasible; }
};

FeasibilityResult check_feasible(const Allocation& alloc, const SystemParams& params,
                                 const CompLoadCurve& curve);

std::string to_string(Constraint c);

}  // namespace pscom

#endif  // PSCOM_MODEL_HPP
