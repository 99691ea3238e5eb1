#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "pscom/solvers.hpp"
#include "product_search.hpp"

namespace pscom {
namespace {

constexpr double kGoldenTolerance = 1e-9;

struct UserOptimum {
  double eta = 1.0;
  double rate = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
};

// Single-user objective under a private power budget: whatever the
// computation does not use goes to transmission.
class UserObjective {
 public:
  UserObjective(double budget_w, double gain, const CompLoadCurve& curve, const SystemParams& params)
      : budget_w_(budget_w), gain_(gain), curve_(curve), params_(params) {}

  double transmit_power(double eta) const {
    return std::max(0.0, budget_w_ - comp_power(curve_, eta, params_));
  }

  double operator()(double eta) const {
    ++evaluations;
    return equivalent_rate(channel_capacity(transmit_power(eta), gain_, params_), eta);
  }

  mutable std::size_t evaluations = 0;

 private:
  double budget_w_;
  double gain_;
  const CompLoadCurve& curve_;
  const SystemParams& params_;
};

// Golden-section maximisation; the objective is quasi-concave on each
// linear piece of the load curve.
std::pair<double, double> golden_max(const UserObjective& f, double a, double b, std::size_t& iterations) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > kGoldenTolerance) {
    ++iterations;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

UserOptimum optimise_user(double budget_w, double gain, const CompLoadCurve& curve,
                          const SystemParams& params) {
  const UserObjective f(budget_w, gain, curve, params);
  UserOptimum best;
  auto offer = [&](double eta, double rate) {
    if (rate > best.rate || (rate == best.rate && eta > best.eta)) {
      best.eta = eta;
      best.rate = rate;
    }
  };

  // Knots first, so a kink optimum is hit exactly.
  for (const Knot& k : curve.knots()) {
    if (k.load * params.p0_w_per_load <= budget_w) offer(k.eta, f(k.eta));
  }

  const double load_cap = params.p0_w_per_load > 0.0 ? budget_w / params.p0_w_per_load : std::numeric_limits<double>::infinity();
  for (const Segment& seg : curve.segments()) {
    // slope < 0, so load <= cap  <=>  eta >= (cap - intercept) / slope.
    const double lo = std::max(seg.eta_lo, std::isfinite(load_cap) ? (load_cap - seg.intercept) / seg.slope : seg.eta_lo);
    const double hi = seg.eta_hi;
    if (!(lo < hi)) continue;
    const auto [eta, rate] = golden_max(f, lo, hi, best.iterations);
    offer(eta, rate);
  }
  best.evaluations = f.evaluations;
  return best;
}

}  // namespace

SolveReport solve_equal_power(const ChannelState& channel, const CompLoadCurve& curve,
                              const SystemParams& params) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n_users = channel.size();
  const double per_user = params.p_max_w / static_cast<double>(n_users);

  SolveReport report;
  report.method = Method::EqualPower;
  if (!(per_user > 0.0)) {
    report.allocation = make_allocation(Vector::Ones(n_users), Vector::Zero(n_users), channel, curve, params);
    report.wall_ms = detail::elapsed_ms(start);
    return report;
  }

  Vector eta(n_users);
  Vector p_t(n_users);
  for (Eigen::Index n = 0; n < n_users; ++n) {
    const UserOptimum opt = optimise_user(per_user, channel[n], curve, params);
    eta[n] = opt.eta;
    p_t[n] = std::max(0.0, per_user - comp_power(curve, opt.eta, params));
    report.outer_candidates_evaluated += opt.evaluations;
    report.bisection_iterations_total += opt.iterations;
  }
  report.allocation = make_allocation(eta, p_t, channel, curve, params);
  report.feasible = true;
  report.wall_ms = detail::elapsed_ms(start);
  return report;
}

}  // namespace pscom
