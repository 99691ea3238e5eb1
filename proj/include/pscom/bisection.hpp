#ifndef PSCOM_BISECTION_HPP
#define PSCOM_BISECTION_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>

namespace pscom {

/// Where a candidate rate puts the power sum relative to the budget.
enum class BudgetVerdict { Under, AtBudget, Over };

struct BisectionOutcome {
  // Largest rate known to satisfy the predicate.
  double tau_bps = 0.0;
  std::size_t iterations = 0;
  // Range shrank to epsilon, or the power sum hit the budget exactly.
  bool converged = false;
  bool exact_break = false;
  double lo = 0.0;
  double hi = 0.0;
};

/// Feasibility bisection over the rate on [lo, hi] for a monotone predicate
/// (feasible below a threshold, infeasible above). The predicate may return
/// either bool or BudgetVerdict; AtBudget stops the search at that point.
///
/// Loops while hi - lo > epsilon. If the predicate already fails at lo the
/// outcome is not converged and tau = lo. The reported tau is always the
/// last feasible point, never an unchecked midpoint.
template <typename Predicate>
BisectionOutcome bisect_tau(Predicate&& feasible_at, double lo, double hi, double epsilon) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::domain_error("bisect_tau: non-finite bounds");
  if (!(lo < hi)) throw std::domain_error("bisect_tau: lower bound must be below upper bound");
  if (!(epsilon > 0)) throw std::domain_error("bisect_tau: epsilon must be positive");

  auto verdict = [&](double tau) {
    if constexpr (std::is_same_v<std::invoke_result_t<Predicate&, double>, BudgetVerdict>) {
      return feasible_at(tau);
    } else {
      return feasible_at(tau) ? BudgetVerdict::Under : BudgetVerdict::Over;
    }
  };

  BisectionOutcome out;
  out.lo = lo;
  out.hi = hi;
  out.tau_bps = lo;
  if (verdict(lo) == BudgetVerdict::Over) return out;

  while (out.hi - out.lo > epsilon) {
    const double mid = 0.5 * (out.lo + out.hi);
    // Spacing of doubles exhausted before epsilon.
    if (!(mid > out.lo && mid < out.hi)) break;
    ++out.iterations;
    const BudgetVerdict v = verdict(mid);
    if (v == BudgetVerdict::Over) {
      out.hi = mid;
    } else {
      out.lo = mid;
      if (v == BudgetVerdict::AtBudget) {
        out.exact_break = true;
        break;
      }
    }
  }
  out.converged = true;
  out.tau_bps = out.lo;
  return out;
}

}  // namespace pscom

#endif  // PSCOM_BISECTION_HPP
