#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "instances.hpp"
#include "pscom/solvers.hpp"

using namespace pscom;

namespace {

SystemParams closed_form_params() {
  SystemParams p;
  p.bandwidth_hz = 1e7;
  p.noise_power_w = 1e-12;
  p.p_max_w = 6.0;
  p.p0_w_per_load = 1e-3;
  return p;
}

const ChannelState two_users(std::vector<double>{1e-9, 2e-9});

// 1e7 * log2(4001), evaluated with 30-digit arithmetic.
constexpr double kTwoUserNonSemantic = 119661449.133456018847538;

bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

// Single-user equal-power objective, written from the model formulas only.
double equal_power_objective(double eta, double budget, double h, const CompLoadCurve& curve, const SystemParams& p) {
  const double pt = budget - curve.load(eta) * p.p0_w_per_load;
  if (pt <= 0) return 0.0;
  return p.bandwidth_hz / eta * std::log2(1.0 + pt * h / p.noise_power_w);
}

// Grid scan over each segment, 20000 points per segment including both ends.
double grid_scan_max(double budget, double h, const CompLoadCurve& curve, const SystemParams& p) {
  double best = 0.0;
  for (const Segment& s : curve.segments()) {
    for (int k = 0; k < 20000; ++k) {
      const double eta = s.eta_hi - (s.eta_hi - s.eta_lo) * k / 19999.0;
      best = std::max(best, equal_power_objective(eta, budget, h, curve, p));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("eta_from_tau") {
  const SystemParams p = closed_form_params();
  const CompLoadCurve curve = CompLoadCurve::default_curve();
  // p_t h / sigma^2 = 1 with p_t = 1e-3, h = 1e-9.
  CHECK(*eta_from_tau(1e7, 1e-3, 1e-9, p, curve) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*eta_from_tau(2e7, 1e-3, 1e-9, p, curve) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(eta_from_tau(1e9, 1e-3, 1e-9, p, curve).has_value());
  // Above 1 clamps.
  CHECK(*eta_from_tau(1e6, 1e-3, 1e-9, p, curve) == 1.0);
  CHECK_THROWS_AS(eta_from_tau(0.0, 1e-3, 1e-9, p, curve), std::domain_error);
}

TEST_CASE("p_t_from_tau") {
  const SystemParams p = closed_form_params();
  CHECK(p_t_from_tau(0.0, 0.7, 1e-9, p) == 0.0);
  CHECK(p_t_from_tau(2e7, 0.5, 1e-9, p) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(std::isinf(p_t_from_tau(1e11, 1.0, 1e-9, p)));
  CHECK_THROWS_AS(p_t_from_tau(-1.0, 0.5, 1e-9, p), std::domain_error);
  CHECK_THROWS_AS(p_t_from_tau(1.0, 0.0, 1e-9, p), std::domain_error);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> tau(1e3, 1e9), eta(0.05, 1.0), lg(-11, -7);
  for (int i = 0; i < 1000; ++i) {
    const double t = tau(rng), e = eta(rng), h = std::pow(10.0, lg(rng));
    const double pt = p_t_from_tau(t, e, h, p);
    if (std::isinf(pt)) continue;
    CHECK(rel_close(equivalent_rate(channel_capacity(pt, h, p), e), t, 1e-9));
  }
}

TEST_CASE("beta range and grid") {
  SystemParams p = closed_form_params();
  CHECK(beta_max(two_users, p) == doctest::Approx(4e-9).epsilon(1e-14));
  CHECK(beta_max(ChannelState(std::vector<double>{1e-9}), p) == doctest::Approx(6e-9).epsilon(1e-14));
  const double g = 3.7e-9;
  CHECK(beta_max(ChannelState(std::vector<double>{g, g}), p) == doctest::Approx(6.0 * g / 2).epsilon(1e-14));

  const auto grid = beta_grid(4e-9, 5);
  REQUIRE(grid.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(grid[i] == doctest::Approx(1e-9 * i).epsilon(1e-14));
  CHECK(grid.back() == 4e-9);
  const auto two = beta_grid(4e-9, 2);
  CHECK(two == std::vector<double>{0.0, 4e-9});
  const auto big = beta_grid(1.0, 500);
  REQUIRE(big.size() == 500);
  CHECK(big[1] - big[0] == doctest::Approx(1.0 / 499));
  CHECK(big.back() == 1.0);
  CHECK_THROWS(beta_grid(1.0, 1));
}

TEST_CASE("bisect_tau") {
  SUBCASE("threshold at the first midpoint") {
    const double lo = 0.0, hi = 1024.0, eps = 1.0;
    const auto out = bisect_tau([&](double t) { return t <= (lo + hi) / 2; }, lo, hi, eps);
    CHECK(out.converged);
    CHECK(out.iterations <= static_cast<std::size_t>(std::ceil(std::log2((hi - lo) / eps))));
    CHECK(out.tau_bps == doctest::Approx(512.0).epsilon(1e-3));
  }
  SUBCASE("table search range takes at most 47 iterations") {
    const auto out = bisect_tau([](double t) { return t <= 1.234e8; }, 1e-3, 1e10, 1e-4);
    CHECK(out.iterations <= 47);
    CHECK(out.hi - out.lo <= 1e-4);
    CHECK(out.tau_bps <= 1.234e8);
    CHECK(out.tau_bps >= 1.234e8 - 1e-4);
  }
  SUBCASE("feasible everywhere saturates at hi") {
    const auto out = bisect_tau([](double) { return true; }, 1e-3, 1e10, 1e-4);
    CHECK(out.tau_bps >= 1e10 - 1e-4);
  }
  SUBCASE("infeasible at lo") {
    const auto out = bisect_tau([](double) { return false; }, 1.0, 2.0, 1e-4);
    CHECK_FALSE(out.converged);
    CHECK(out.tau_bps == 1.0);
    CHECK(out.iterations == 0);
  }
  SUBCASE("exact budget stops the loop") {
    const auto out = bisect_tau(
        [](double t) { return t == 5.0 ? BudgetVerdict::AtBudget : (t < 5.0 ? BudgetVerdict::Under : BudgetVerdict::Over); },
        0.0, 10.0, 1e-6);
    CHECK(out.exact_break);
    CHECK(out.tau_bps == 5.0);
    CHECK(out.iterations == 1);
  }
  CHECK_THROWS_AS(bisect_tau([](double) { return true; }, 0.0, std::numeric_limits<double>::infinity(), 1.0), std::domain_error);
  CHECK_THROWS_AS(bisect_tau([](double) { return true; }, 2.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("enumerate_eta_vectors") {
  const CompLoadCurve curve = CompLoadCurve::default_curve();
  CHECK(enumerate_eta_vectors(curve, 2).size() == 25);

  const auto one = enumerate_eta_vectors(curve, 1);
  REQUIRE(one.size() == 5);
  std::size_t i = 0;
  for (const Vector& v : one) CHECK(v[0] == curve.breakpoints()[i++]);

  const auto three = enumerate_eta_vectors(curve, 3);
  REQUIRE(three.size() == 125);
  CHECK(three[0] == Vector::Ones(3));
  CHECK(three[124] == Vector::Constant(3, 0.2));
  CHECK(three[1] == (Vector(3) << 1.0, 1.0, 0.8).finished());
  CHECK(three[5] == (Vector(3) << 1.0, 0.8, 1.0).finished());
  CHECK(method2_candidate_count(curve, 7, false) == 78125.0);
  CHECK(method2_candidate_count(curve, 7, true) == 5.0);
}

TEST_CASE("non-semantic closed form") {
  const SystemParams p = closed_form_params();
  const SolveReport r = solve_non_semantic(two_users, p);
  CHECK(r.feasible);
  CHECK(rel_close(r.tau_bps(), kTwoUserNonSemantic, 1e-12));
  const Vector& rates = r.allocation.rates_bps;
  CHECK(rates.maxCoeff() - rates.minCoeff() <= 1e-12 * rates.maxCoeff());
  CHECK(total_power(r.allocation) == doctest::Approx(6.0).epsilon(1e-15));

  const ChannelState single(std::vector<double>{1e-9});
  CHECK(rel_close(solve_non_semantic(single, p).tau_bps(), 1e7 * std::log2(1.0 + 6.0 * 1e-9 / 1e-12), 1e-12));
}

TEST_CASE("method 1") {
  const SystemParams p = closed_form_params();
  const CompLoadCurve curve = CompLoadCurve::default_curve();

  SUBCASE("beta_max endpoint reaches the non-semantic rate") {
    const double b = beta_max(two_users, p);
    const auto out = bisect_tau([&](double t) { return method1_power_sum(b, t, two_users, curve, p) <= p.budget_limit(); },
                                p.tau_lo_init, p.tau_hi_init, p.epsilon);
    CHECK(out.tau_bps >= kTwoUserNonSemantic - p.epsilon);
    // Only the relative budget slack lets it go beyond.
    CHECK(out.tau_bps <= kTwoUserNonSemantic * (1 + 1e-8));
  }
  SUBCASE("full solve dominates non-semantic and is feasible") {
    const SolveReport r = solve_method1(two_users, curve, p);
    CHECK(r.feasible);
    CHECK(r.outer_candidates_evaluated == 500);
    CHECK(r.tau_bps() >= kTwoUserNonSemantic - p.epsilon);
    CHECK(check_feasible(r.allocation, p, curve).feasible);
    CHECK(r.allocation.rates_bps.minCoeff() >= r.search_tau_bps - p.epsilon);
  }
  SUBCASE("single user beats the non-semantic closed form") {
    const ChannelState single(std::vector<double>{1e-9});
    const SolveReport r = solve_method1(single, curve, p);
    CHECK(r.tau_bps() >= 1e7 * std::log2(1.0 + 6.0 * 1e-9 / 1e-12) - p.epsilon);
  }
  SUBCASE("vanishing power budget gives vanishing rate") {
    SystemParams tiny = p;
    double previous = std::numeric_limits<double>::infinity();
    for (double pmax : {1e-3, 1e-6, 1e-9, 1e-12}) {
      tiny.p_max_w = pmax;
      const double tau = solve_method1(two_users, curve, tiny).tau_bps();
      CHECK(tau < previous);
      previous = tau;
    }
    CHECK(previous < 1e5);
  }
}

TEST_CASE("method 2") {
  const SystemParams p = closed_form_params();
  const CompLoadCurve curve = CompLoadCurve::default_curve();

  SUBCASE("all-ones vector equals the non-semantic rate") {
    const auto out = bisect_fixed_eta(Vector::Ones(2), two_users, curve, p);
    CHECK(out.tau_bps >= kTwoUserNonSemantic - p.epsilon);
    CHECK(out.tau_bps <= kTwoUserNonSemantic * (1 + 1e-8));
  }
  SUBCASE("one user, one segment: best of two closed forms") {
    const CompLoadCurve one_seg = validate_curve({{1.0, 0.0}, {0.5, 1000.0}});
    const ChannelState single(std::vector<double>{1e-9});
    const double uncompressed = 1e7 * std::log2(1.0 + 6.0 * 1e-9 / 1e-12);
    const double compressed = 2e7 * std::log2(1.0 + 5.0 * 1e-9 / 1e-12);
    const SolveReport r = solve_method2(single, one_seg, p);
    CHECK(r.outer_candidates_evaluated == 2);
    CHECK(r.winning_candidate == 1);
    CHECK(rel_close(r.tau_bps(), std::max(uncompressed, compressed), 1e-9));
  }
  SUBCASE("budget below every computation cost keeps eta at 1") {
    SystemParams low = p;
    low.p_max_w = 0.05;  // cheapest compression costs 0.1 W
    const SolveReport r = solve_method2(two_users, curve, low);
    CHECK(r.feasible);
    CHECK(r.winning_candidate == 0);
    CHECK(r.allocation.eta == Vector::Ones(2));
    CHECK(rel_close(r.tau_bps(), solve_non_semantic(two_users, low).tau_bps(), 1e-8));
  }
  SUBCASE("shared-eta variant searches the diagonal only") {
    const ChannelState three(std::vector<double>{1e-9, 3e-9, 5e-10});
    SolveOptions shared;
    shared.method2_shared_eta = true;
    const SolveReport s = solve_method2(three, curve, p, shared);
    const SolveReport c = solve_method2(three, curve, p);
    CHECK(s.outer_candidates_evaluated == 5);
    CHECK(s.allocation.eta.maxCoeff() == s.allocation.eta.minCoeff());
    CHECK(s.tau_bps() <= c.tau_bps() + p.epsilon);
  }
}

TEST_CASE("equal power") {
  const CompLoadCurve curve = CompLoadCurve::default_curve();

  SUBCASE("compression too expensive: eta = 1") {
    SystemParams p = closed_form_params();
    p.p0_w_per_load = 1.0;  // 100 W for the first knot, far above 3 W per user
    const SolveReport r = solve_equal_power(two_users, curve, p);
    CHECK(r.allocation.eta == Vector::Ones(2));
    CHECK(rel_close(r.allocation.rates_bps[0], 1e7 * std::log2(1.0 + 3.0 * 1e-9 / 1e-12), 1e-12));
  }
  SUBCASE("free compression: eta = D_S") {
    SystemParams p = closed_form_params();
    p.p0_w_per_load = 0.0;
    const SolveReport r = solve_equal_power(two_users, curve, p);
    CHECK(r.allocation.eta == Vector::Constant(2, 0.2));
    for (Eigen::Index n = 0; n < 2; ++n) {
      CHECK(r.allocation.rates_bps[n] >= grid_scan_max(3.0, two_users[n], curve, p) * (1 - 1e-12));
    }
  }
  SUBCASE("default scenario matches a grid scan") {
    SystemParams p;
    const ChannelState channel = generate_channel_gains(RandomChannelSpec{});
    const SolveReport r = solve_equal_power(channel, curve, p);
    CHECK(r.feasible);
    CHECK(check_feasible(r.allocation, p, curve).feasible);
    for (Eigen::Index n = 0; n < channel.size(); ++n) {
      const double scan = grid_scan_max(p.p_max_w / 3, channel[n], curve, p);
      CHECK(rel_close(r.allocation.rates_bps[n], scan, 1e-6));
      CHECK(r.allocation.rates_bps[n] >= scan * (1 - 1e-12));
    }
  }
  SUBCASE("interior optimum on a segment") {
    // Steep single segment where the optimum sits strictly inside (0.3, 1).
    SystemParams p = closed_form_params();
    p.p0_w_per_load = 2.1e-3;
    const CompLoadCurve steep = validate_curve({{1.0, 0.0}, {0.3, 2800.0}});
    const ChannelState single(std::vector<double>{1e-10});
    const SolveReport r = solve_equal_power(single, steep, p);
    const double eta = r.allocation.eta[0];
    CHECK(eta > 0.3);
    CHECK(eta < 1.0);
    const double scan = grid_scan_max(6.0, 1e-10, steep, p);
    CHECK(r.allocation.rates_bps[0] >= scan * (1 - 1e-12));
    CHECK(rel_close(r.allocation.rates_bps[0], scan, 1e-6));
  }
}

TEST_CASE("oracle") {
  const CompLoadCurve curve = CompLoadCurve::default_curve();
  const SystemParams p = closed_form_params();
  const ChannelState three(std::vector<double>{1e-9, 3e-9, 5e-10});

  const auto cands = oracle_candidates(curve, 1);
  CHECK(cands == std::vector<double>{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.30000000000000004, 0.2});
  CHECK(oracle_candidates(curve, 0) == curve.breakpoints());

  const SolveReport m2 = solve_method2(three, curve, p);
  const SolveReport knots = solve_oracle(three, curve, p, 0);
  CHECK(knots.tau_bps() == m2.tau_bps());
  CHECK(knots.winning_candidate == m2.winning_candidate);

  CHECK(solve_oracle(three, curve, p, 1).tau_bps() >= m2.tau_bps() - p.epsilon);

  const CompLoadCurve two_seg = validate_curve({{1.0, 0.0}, {0.6, 200.0}, {0.3, 800.0}});
  const auto start = std::chrono::steady_clock::now();
  const SolveReport fine = solve_oracle(two_users, two_seg, p, 50);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
  const double best = std::max(solve_method1(two_users, two_seg, p).tau_bps(), solve_method2(two_users, two_seg, p).tau_bps());
  CHECK(fine.tau_bps() >= best - p.epsilon);

  const ChannelState four(std::vector<double>{1e-9, 1e-9, 1e-9, 1e-9});
  CHECK_THROWS_AS(solve_oracle(four, curve, p, 0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Properties on seeded random instances.

TEST_CASE("property: feasibility, certificates, dominance, equal rates") {
  const CompLoadCurve curve = CompLoadCurve::default_curve();
  for (int i = 0; i < 40; ++i) {
    const auto inst = testing::seeded_instance(2024, i);
    const SystemParams& p = inst.params;
    const ChannelState& ch = inst.channel;
    CAPTURE(i);

    const SolveReport m1 = solve_method1(ch, curve, p);
    const SolveReport m2 = solve_method2(ch, curve, p);
    const SolveReport ep = solve_equal_power(ch, curve, p);
    const SolveReport ns = solve_non_semantic(ch, p);
    for (const SolveReport* r : {&m1, &m2, &ep, &ns}) {
      REQUIRE(r->feasible);
      CHECK(check_feasible(r->allocation, p, curve).feasible);
      CHECK(r->allocation.tau_bps == r->allocation.rates_bps.minCoeff());
    }
    CHECK(m1.allocation.rates_bps.minCoeff() >= m1.search_tau_bps - p.epsilon);
    CHECK(m2.allocation.rates_bps.minCoeff() >= m2.search_tau_bps - p.epsilon);

    // Budget holds at the reported rate and fails 10 epsilon above it.
    CHECK(method1_power_sum(m1.beta, m1.search_tau_bps, ch, curve, p) <= p.budget_limit());
    CHECK(method1_power_sum(m1.beta, m1.search_tau_bps + 10 * p.epsilon, ch, curve, p) > p.budget_limit());
    CHECK(method2_power_sum(m2.allocation.eta, m2.search_tau_bps, ch, curve, p) <= p.budget_limit());
    CHECK(method2_power_sum(m2.allocation.eta, m2.search_tau_bps + 10 * p.epsilon, ch, curve, p) > p.budget_limit());

    CHECK(m1.tau_bps() >= ns.tau_bps() - p.epsilon);
    CHECK(m2.tau_bps() >= ns.tau_bps() - p.epsilon);
    CHECK(m2.allocation.rates_bps.maxCoeff() - m2.allocation.rates_bps.minCoeff() <= 2 * p.epsilon);
  }
}

TEST_CASE("property: parallel and serial runs agree bit-for-bit") {
  const CompLoadCurve curve = CompLoadCurve::default_curve();
  for (int i = 0; i < 12; ++i) {
    const auto inst = testing::seeded_instance(99, i);
    SolveOptions serial, parallel;
    serial.jobs = 1;
    parallel.jobs = 3;
    for (auto solve : {&solve_method1, &solve_method2}) {
      const SolveReport a = solve(inst.channel, curve, inst.params, serial);
      const SolveReport b = solve(inst.channel, curve, inst.params, parallel);
      CHECK(a.winning_candidate == b.winning_candidate);
      CHECK(a.bisection_iterations_total == b.bisection_iterations_total);
      CHECK((a.allocation.eta.array() == b.allocation.eta.array()).all());
      CHECK((a.allocation.p_t_w.array() == b.allocation.p_t_w.array()).all());
      CHECK(a.tau_bps() == b.tau_bps());
    }
  }
}

TEST_CASE("property: non-semantic rate invariant under common gain/noise scaling") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> lc(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const auto inst = testing::seeded_instance(31, i);
    const double c = std::pow(10.0, lc(rng));
    SystemParams scaled = inst.params;
    scaled.noise_power_w *= c;
    const ChannelState ch(Vector(inst.channel.gains() * c));
    CHECK(rel_close(solve_non_semantic(ch, scaled).tau_bps(), solve_non_semantic(inst.channel, inst.params).tau_bps(),
                    1e-12));
  }
}
