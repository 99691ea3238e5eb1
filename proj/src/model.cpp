#include "pscom/model.hpp"

#include <cmath>
#include <limits>

#include "pscom/curve.hpp"

namespace pscom {

void SystemParams::validate() const {
  auto require = [](bool ok, const char* field, const char* rule) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + rule);
  };
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0, "bandwidth_hz", "must be > 0");
  require(std::isfinite(noise_power_w) && noise_power_w > 0, "noise_power_w", "must be > 0");
  require(std::isfinite(p_max_w) && p_max_w > 0, "p_max_w", "must be > 0");
  require(std::isfinite(p0_w_per_load) && p0_w_per_load >= 0, "p0_w_per_load", "must be >= 0");
  require(std::isfinite(epsilon) && epsilon > 0, "epsilon", "must be > 0");
  require(m_beta_samples >= 2, "m_beta_samples", "must be >= 2");
  require(std::isfinite(tau_lo_init) && tau_lo_init >= 0, "tau_lo_init", "must be >= 0");
  require(std::isfinite(tau_hi_init) && tau_hi_init > tau_lo_init, "tau_hi_init",
          "must exceed tau_lo_init");
}

ChannelState::ChannelState(Vector gains) : gains_(std::move(gains)) {
  if (gains_.size() < 1) throw std::invalid_argument("channel: at least one user is required");
  for (Eigen::Index n = 0; n < gains_.size(); ++n) {
    if (!(std::isfinite(gains_[n]) && gains_[n] > 0)) {
      throw std::invalid_argument("channel: gain " + std::to_string(n) + " must be finite and > 0");
    }
  }
}

ChannelState::ChannelState(const std::vector<double>& gains)
    : ChannelState(Vector(Eigen::Map<const Vector>(gains.data(), static_cast<Eigen::Index>(gains.size())))) {}

ChannelState ChannelState::prefix(Eigen::Index count) const {
  if (count < 1 || count > gains_.size()) throw std::out_of_range("channel prefix: bad user count");
  return ChannelState(Vector(gains_.head(count)));
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

Allocation make_allocation(const Vector& eta, const Vector& p_t_w, const ChannelState& channel,
                           const CompLoadCurve& curve, const SystemParams& params) {
  const Eigen::Index n_users = channel.size();
  if (eta.size() != n_users || p_t_w.size() != n_users) {
    throw std::invalid_argument("make_allocation: vector length does not match user count");
  }
  Allocation a;
  a.eta = eta;
  a.p_t_w = p_t_w;
  a.p_c_w.resize(n_users);
  a.rates_bps.resize(n_users);
  for (Eigen::Index n = 0; n < n_users; ++n) {
    a.p_c_w[n] = comp_power(curve, eta[n], params);
    a.rates_bps[n] = equivalent_rate(channel_capacity(p_t_w[n], channel[n], params), eta[n]);
  }
  a.tau_bps = a.rates_bps.minCoeff();
  return a;
}

double total_power(const Allocation& alloc) { return alloc.p_t_w.sum() + alloc.p_c_w.sum(); }

FeasibilityResult check_feasible(const Allocation& alloc, const SystemParams& params,
                                 const CompLoadCurve& curve) {
  FeasibilityResult result;
  auto fail = [&](Constraint c, std::size_t user, double value) {
    result.feasible = false;
    result.violations.push_back({c, user, value});
  };

  const Eigen::Index n = alloc.eta.size();
  if (alloc.p_t_w.size() != n || alloc.p_c_w.size() != n || alloc.rates_bps.size() != n) {
    fail(Constraint::Shape, Violation::npos, static_cast<double>(n));
    return result;
  }
  const double total = total_power(alloc);
  if (!(total <= params.budget_limit())) fail(Constraint::TotalPower, Violation::npos, total);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(alloc.p_t_w[i] >= 0.0)) fail(Constraint::TransmitPowerSign, i, alloc.p_t_w[i]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!curve.in_domain(alloc.eta[i])) fail(Constraint::CompressionRange, i, alloc.eta[i]);
  }
  return result;
}

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::TotalPower: return "total_power";
    case Constraint::TransmitPowerSign: return "transmit_power_sign";
    case Constraint::CompressionRange: return "compression_range";
    case Constraint::Shape: return "shape";
  }
  return "unknown";
}

}  // namespace pscom
