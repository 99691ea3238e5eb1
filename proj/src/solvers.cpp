#include "pscom/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "pscom/parallel.hpp"
#include "product_search.hpp"

namespace pscom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ratio that makes capacity / eta equal tau, clamped to 1. A non-positive
// rate is met by any ratio, so it maps to 1 as well.
double clamped_ratio(double capacity, double tau) {
  if (!(tau > 0.0)) return 1.0;
  return std::min(capacity / tau, 1.0);
}

BudgetVerdict compare_budget(double power_sum, double limit) {
  if (power_sum > limit) return BudgetVerdict::Over;
  if (power_sum == limit) return BudgetVerdict::AtBudget;
  return BudgetVerdict::Under;
}

Allocation empty_allocation(const ChannelState& channel, const CompLoadCurve& curve,
                            const SystemParams& params) {
  const Eigen::Index n = channel.size();
  return make_allocation(Vector::Ones(n), Vector::Zero(n), channel, curve, params);
}

// Fixed-beta state for Method-1: transmit powers and capacities do not depend
// on the rate, so they are computed once per sample.
struct BetaSample {
  Vector p_t;
  Vector capacity;
  double p_t_sum = 0.0;

  BetaSample(double beta, const ChannelState& channel, const SystemParams& params)
      : p_t(beta * channel.gains().cwiseInverse()) {
    capacity = channel_capacities(p_t, channel, params);
    p_t_sum = p_t.sum();
  }

  BudgetVerdict verdict(double tau, const CompLoadCurve& curve, const SystemParams& params) const {
    double sum = p_t_sum;
    bool rate_dependent = false;
    for (Eigen::Index n = 0; n < capacity.size(); ++n) {
      const double eta = clamped_ratio(capacity[n], tau);
      if (eta < curve.eta_min()) return BudgetVerdict::Over;
      if (eta < 1.0) rate_dependent = true;
      sum += comp_power(curve, eta, params);
    }
    const BudgetVerdict v = compare_budget(sum, params.budget_limit());
    // Power sum flat in tau: hitting the budget says nothing about the rate.
    if (v == BudgetVerdict::AtBudget && !(rate_dependent && params.p0_w_per_load > 0.0)) {
      return BudgetVerdict::Under;
    }
    return v;
  }

  Vector ratios(double tau) const {
    Vector eta(capacity.size());
    for (Eigen::Index n = 0; n < capacity.size(); ++n) eta[n] = clamped_ratio(capacity[n], tau);
    return eta;
  }
};

}  // namespace

namespace detail {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

SolveReport search_eta_product(Method method, const std::vector<double>& candidates, bool shared,
                               const ChannelState& channel, const CompLoadCurve& curve,
                               const SystemParams& params, unsigned jobs) {
  const auto start = std::chrono::steady_clock::now();
  const auto n_users = static_cast<std::size_t>(channel.size());
  const EtaVectorEnumerator product(candidates, shared ? 1 : n_users);

  auto eta_at = [&](std::size_t index) {
    if (!shared) return product[index];
    return Vector(Vector::Constant(channel.size(), candidates[index]));
  };

  const BestCandidate best = reduce_best(product.size(), resolve_jobs(jobs), [&](std::size_t i) {
    const Vector eta = eta_at(i);
    const BisectionOutcome b = bisect_fixed_eta(eta, channel, curve, params);
    CandidateScore score;
    score.iterations = b.iterations;
    score.feasible = b.converged;
    if (b.converged) {
      double rate = kInf;
      for (Eigen::Index n = 0; n < channel.size(); ++n) {
        const double p_t = p_t_from_tau(b.tau_bps, eta[n], channel[n], params);
        rate = std::min(rate, equivalent_rate(channel_capacity(p_t, channel[n], params), eta[n]));
      }
      score.score = rate;
    }
    return score;
  });

  SolveReport report;
  report.method = method;
  report.outer_candidates_evaluated = product.size();
  report.bisection_iterations_total = best.iterations_total;
  if (best.found()) {
    const Vector eta = eta_at(best.index);
    const BisectionOutcome b = bisect_fixed_eta(eta, channel, curve, params);
    Vector p_t(channel.size());
    for (Eigen::Index n = 0; n < channel.size(); ++n) p_t[n] = p_t_from_tau(b.tau_bps, eta[n], channel[n], params);
    report.allocation = make_allocation(eta, p_t, channel, curve, params);
    report.feasible = true;
    report.search_tau_bps = b.tau_bps;
    report.winning_candidate = best.index;
  } else {
    report.allocation = empty_allocation(channel, curve, params);
  }
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace detail

unsigned resolve_jobs(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PSCOM_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Method1: return "Method1";
    case Method::Method2: return "Method2";
    case Method::EqualPower: return "EqualPower";
    case Method::NonSemantic: return "NonSemantic";
    case Method::Oracle: return "Oracle";
  }
  return "Unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '_' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "method1") return Method::Method1;
  if (key == "method2") return Method::Method2;
  if (key == "equalpower") return Method::EqualPower;
  if (key == "nonsemantic") return Method::NonSemantic;
  if (key == "oracle") return Method::Oracle;
  return std::nullopt;
}

std::optional<double> eta_from_tau(double tau, double p_t, double h, const SystemParams& params,
                                   const CompLoadCurve& curve) {
  if (!(tau > 0.0)) throw std::domain_error("eta_from_tau: rate must be positive");
  const double eta = clamped_ratio(channel_capacity(p_t, h, params), tau);
  if (eta < curve.eta_min()) return std::nullopt;
  return eta;
}

double p_t_from_tau(double tau, double eta, double h, const SystemParams& params) {
  if (!(tau >= 0.0)) throw std::domain_error("p_t_from_tau: negative rate");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("p_t_from_tau: ratio outside (0, 1]");
  if (!(h > 0.0)) throw std::domain_error("p_t_from_tau: channel gain must be positive");
  const double exponent = tau * eta / params.bandwidth_hz;
  if (exponent > 1024.0) return kInf;
  return std::expm1(exponent * std::numbers::ln2) * params.noise_power_w / h;
}

double beta_max(const ChannelState& channel, const SystemParams& params) {
  return params.p_max_w / channel.inverse_gain_sum();
}

std::vector<double> beta_grid(double beta_max, std::size_t m) {
  if (m < 2) throw std::invalid_argument("beta_grid: need at least 2 samples");
  std::vector<double> grid(m);
  const double step = beta_max / static_cast<double>(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) grid[i] = step * static_cast<double>(i);
  grid[m - 1] = beta_max;
  return grid;
}

double method1_power_sum(double beta, double tau, const ChannelState& channel,
                         const CompLoadCurve& curve, const SystemParams& params) {
  const BetaSample sample(beta, channel, params);
  double sum = sample.p_t_sum;
  for (Eigen::Index n = 0; n < channel.size(); ++n) {
    const double eta = clamped_ratio(sample.capacity[n], tau);
    if (eta < curve.eta_min()) return kInf;
    sum += comp_power(curve, eta, params);
  }
  return sum;
}

double method2_power_sum(const Vector& eta, double tau, const ChannelState& channel,
                         const CompLoadCurve& curve, const SystemParams& params) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < eta.size(); ++n) sum += comp_power(curve, eta[n], params);
  for (Eigen::Index n = 0; n < eta.size(); ++n) sum += p_t_from_tau(tau, eta[n], channel[n], params);
  return sum;
}

BisectionOutcome bisect_fixed_eta(const Vector& eta, const ChannelState& channel,
                                  const CompLoadCurve& curve, const SystemParams& params) {
  if (eta.size() != channel.size()) throw std::invalid_argument("bisect_fixed_eta: length mismatch");
  double compute_sum = 0.0;
  for (Eigen::Index n = 0; n < eta.size(); ++n) compute_sum += comp_power(curve, eta[n], params);
  const double limit = params.budget_limit();

  auto verdict = [&](double tau) {
    double sum = compute_sum;
    for (Eigen::Index n = 0; n < eta.size(); ++n) {
      sum += p_t_from_tau(tau, eta[n], channel[n], params);
      if (sum > limit) return BudgetVerdict::Over;
    }
    return compare_budget(sum, limit);
  };
  return bisect_tau(verdict, params.tau_lo_init, params.tau_hi_init, params.epsilon);
}

EtaVectorEnumerator::EtaVectorEnumerator(std::vector<double> candidates, std::size_t n_users)
    : candidates_(std::move(candidates)), n_users_(n_users), size_(1) {
  if (candidates_.empty()) throw std::invalid_argument("eta enumeration: empty candidate list");
  const double count = std::pow(static_cast<double>(candidates_.size()), static_cast<double>(n_users));
  if (count > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    throw std::overflow_error("eta enumeration: candidate count overflows");
  }
  for (std::size_t i = 0; i < n_users_; ++i) size_ *= candidates_.size();
}

void EtaVectorEnumerator::decode(std::size_t index, std::vector<std::size_t>& digits) const {
  digits.resize(n_users_);
  const std::size_t base = candidates_.size();
  for (std::size_t u = n_users_; u-- > 0;) {
    digits[u] = index % base;
    index /= base;
  }
}

Vector EtaVectorEnumerator::operator[](std::size_t index) const {
  if (index >= size_) throw std::out_of_range("eta enumeration: index out of range");
  Vector eta(static_cast<Eigen::Index>(n_users_));
  const std::size_t base = candidates_.size();
  for (std::size_t u = n_users_; u-- > 0;) {
    eta[static_cast<Eigen::Index>(u)] = candidates_[index % base];
    index /= base;
  }
  return eta;
}

EtaVectorEnumerator enumerate_eta_vectors(const CompLoadCurve& curve, std::size_t n_users) {
  return EtaVectorEnumerator(curve.breakpoints(), n_users);
}

double method2_candidate_count(const CompLoadCurve& curve, std::size_t n_users, bool shared_eta) {
  const auto base = static_cast<double>(curve.knots().size());
  return shared_eta ? base : std::pow(base, static_cast<double>(n_users));
}

SolveReport solve_method1(const ChannelState& channel, const CompLoadCurve& curve,
                          const SystemParams& params, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> betas = beta_grid(beta_max(channel, params), params.m_beta_samples);

  auto run = [&](const BetaSample& sample) {
    return bisect_tau([&](double tau) { return sample.verdict(tau, curve, params); },
                      params.tau_lo_init, params.tau_hi_init, params.epsilon);
  };

  const BestCandidate best = reduce_best(betas.size(), resolve_jobs(options.jobs), [&](std::size_t i) {
    const BetaSample sample(betas[i], channel, params);
    const BisectionOutcome b = run(sample);
    CandidateScore score;
    score.iterations = b.iterations;
    score.feasible = b.converged;
    if (b.converged) {
      const Vector eta = sample.ratios(b.tau_bps);
      double rate = kInf;
      for (Eigen::Index n = 0; n < eta.size(); ++n) {
        rate = std::min(rate, equivalent_rate(sample.capacity[n], eta[n]));
      }
      score.score = rate;
    }
    return score;
  });

  SolveReport report;
  report.method = Method::Method1;
  report.outer_candidates_evaluated = betas.size();
  report.bisection_iterations_total = best.iterations_total;
  if (best.found()) {
    const BetaSample sample(betas[best.index], channel, params);
    const BisectionOutcome b = run(sample);
    report.allocation = make_allocation(sample.ratios(b.tau_bps), sample.p_t, channel, curve, params);
    report.feasible = true;
    report.search_tau_bps = b.tau_bps;
    report.winning_candidate = best.index;
    report.beta = betas[best.index];
  } else {
    report.allocation = empty_allocation(channel, curve, params);
  }
  report.wall_ms = detail::elapsed_ms(start);
  return report;
}

SolveReport solve_method2(const ChannelState& channel, const CompLoadCurve& curve,
                          const SystemParams& params, const SolveOptions& options) {
  return detail::search_eta_product(Method::Method2, curve.breakpoints(), options.method2_shared_eta,
                                    channel, curve, params, options.jobs);
}

SolveReport solve_non_semantic(const ChannelState& channel, const SystemParams& params) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n_users = channel.size();
  const double beta = beta_max(channel, params);

  SolveReport report;
  report.method = Method::NonSemantic;
  Allocation& a = report.allocation;
  a.eta = Vector::Ones(n_users);
  a.p_t_w = beta * channel.gains().cwiseInverse();
  // g(1) = 0 for every valid curve.
  a.p_c_w = Vector::Zero(n_users);
  a.rates_bps.resize(n_users);
  for (Eigen::Index n = 0; n < n_users; ++n) {
    a.rates_bps[n] = equivalent_rate(channel_capacity(a.p_t_w[n], channel[n], params), a.eta[n]);
  }
  a.tau_bps = a.rates_bps.minCoeff();
  report.feasible = true;
  report.outer_candidates_evaluated = 1;
  report.beta = beta;
  report.wall_ms = detail::elapsed_ms(start);
  return report;
}

}  // namespace pscom
