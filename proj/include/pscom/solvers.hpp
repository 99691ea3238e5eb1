#ifndef PSCOM_SOLVERS_HPP
#define PSCOM_SOLVERS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pscom/bisection.hpp"
#include "pscom/curve.hpp"
#include "pscom/model.hpp"

namespace pscom {

enum class Method { Method1, Method2, EqualPower, NonSemantic, Oracle };

std::string to_string(Method m);
/// Accepts the CSV names ("Method1") and the config names ("method1",
/// "equal_power", ...).
std::optional<Method> parse_method(std::string_view name);

struct SolveOptions {
  // 0 resolves through PSCOM_JOBS, then 1.
  unsigned jobs = 1;
  // Method-2 variant where every user shares one candidate ratio.
  bool method2_shared_eta = false;
};

struct SolveReport {
  Method method = Method::NonSemantic;
  Allocation allocation;
  bool feasible = false;
  std::size_t outer_candidates_evaluated = 0;
  std::uint64_t bisection_iterations_total = 0;

  // Bisection output for the winning candidate (0 for closed-form schemes).
  double search_tau_bps = 0.0;
  // Index of the winning beta sample or eta vector.
  std::size_t winning_candidate = 0;
  // Method-1 only: the winning power proportion.
  double beta = 0.0;
  double wall_ms = 0.0;

  double tau_bps() const { return allocation.tau_bps; }
};

// ---------------------------------------------------------------------------
// Closed-form pieces shared by the algorithms.

/// Compression ratio that makes a user's equivalent rate equal tau at fixed
/// transmit power, clamped to 1 from above. nullopt when it falls below the
/// curve's domain.
std::optional<double> eta_from_tau(double tau, double p_t, double h, const SystemParams& params,
                                   const CompLoadCurve& curve);

/// Transmit power reaching rate tau at ratio eta: (2^(tau eta / B) - 1) sigma^2 / h.
/// Returns +inf once the exponent exceeds 1024.
double p_t_from_tau(double tau, double eta, double h, const SystemParams& params);

/// Upper end of the power-proportion range, P_max / sum(1/h).
double beta_max(const ChannelState& channel, const SystemParams& params);

/// m equidistant samples over [0, beta_max], both endpoints included.
std::vector<double> beta_grid(double beta_max, std::size_t m);

/// Method-1 power sum for proportion beta at rate tau; +inf when some user
/// would need a ratio below the curve domain.
double method1_power_sum(double beta, double tau, const ChannelState& channel,
                         const CompLoadCurve& curve, const SystemParams& params);

/// Method-2 power sum for a fixed eta vector at rate tau.
double method2_power_sum(const Vector& eta, double tau, const ChannelState& channel,
                         const CompLoadCurve& curve, const SystemParams& params);

/// Exact max-min rate for a fixed eta vector: bisection on the equal-rate
/// transmit powers. Not converged when the computation power alone breaks
/// the budget.
BisectionOutcome bisect_fixed_eta(const Vector& eta, const ChannelState& channel,
                                  const CompLoadCurve& curve, const SystemParams& params);

/// Cartesian product of per-user candidate ratios in lexicographic order
/// (user 0 most significant, candidates in the given order).
class EtaVectorEnumerator {
 public:
  EtaVectorEnumerator(std::vector<double> candidates, std::size_t n_users);

  std::size_t size() const { return size_; }
  Vector operator[](std::size_t index) const;
  void decode(std::size_t index, std::vector<std::size_t>& digits) const;
  const std::vector<double>& candidates() const { return candidates_; }
  std::size_t n_users() const { return n_users_; }

  class iterator {
   public:
    using value_type = Vector;
    using difference_type = std::ptrdiff_t;
    iterator(const EtaVectorEnumerator* owner, std::size_t index) : owner_(owner), index_(index) {}
    Vector operator*() const { return (*owner_)[index_]; }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const EtaVectorEnumerator* owner_;
    std::size_t index_;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  std::vector<double> candidates_;
  std::size_t n_users_;
  std::size_t size_;
};

EtaVectorEnumerator enumerate_eta_vectors(const CompLoadCurve& curve, std::size_t n_users);

/// (S+1)^N, or S+1 in shared mode, as a double so huge counts do not wrap.
double method2_candidate_count(const CompLoadCurve& curve, std::size_t n_users, bool shared_eta);

// ---------------------------------------------------------------------------
// Schemes.

SolveReport solve_method1(const ChannelState& channel, const CompLoadCurve& curve,
                          const SystemParams& params, const SolveOptions& options = {});

SolveReport solve_method2(const ChannelState& channel, const CompLoadCurve& curve,
                          const SystemParams& params, const SolveOptions& options = {});

SolveReport solve_equal_power(const ChannelState& channel, const CompLoadCurve& curve,
                              const SystemParams& params);

/// No compression; transmit power inversely proportional to the gain.
SolveReport solve_non_semantic(const ChannelState& channel, const SystemParams& params);

/// Largest user count the oracle accepts.
inline constexpr std::size_t kOracleMaxUsers = 3;

/// Per-user grid: every knot plus `grid_points_per_segment` equidistant
/// interior points per segment, descending from 1.
std::vector<double> oracle_candidates(const CompLoadCurve& curve, std::size_t grid_points_per_segment);

/// Brute-force search over the Cartesian oracle grid with the exact inner
/// bisection. Throws std::invalid_argument above kOracleMaxUsers users.
SolveReport solve_oracle(const ChannelState& channel, const CompLoadCurve& curve,
                         const SystemParams& params, std::size_t grid_points_per_segment,
                         const SolveOptions& options = {});

}  // namespace pscom

#endif  // PSCOM_SOLVERS_HPP
