#include <string>

#include "pscom/solvers.hpp"
#include "product_search.hpp"

namespace pscom {

std::vector<double> oracle_candidates(const CompLoadCurve& curve, std::size_t grid_points_per_segment) {
  const std::vector<Knot>& knots = curve.knots();
  std::vector<double> values;
  values.reserve(knots.size() + grid_points_per_segment * curve.segment_count());
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double hi = knots[s].eta;
    const double lo = knots[s + 1].eta;
    values.push_back(hi);
    const double step = (hi - lo) / static_cast<double>(grid_points_per_segment + 1);
    for (std::size_t k = 1; k <= grid_points_per_segment; ++k) {
      values.push_back(hi - step * static_cast<double>(k));
    }
  }
  values.push_back(knots.back().eta);
  return values;
}

SolveReport solve_oracle(const ChannelState& channel, const CompLoadCurve& curve,
                         const SystemParams& params, std::size_t grid_points_per_segment,
                         const SolveOptions& options) {
  const auto n_users = static_cast<std::size_t>(channel.size());
  if (n_users > kOracleMaxUsers) {
    throw std::invalid_argument("oracle: " + std::to_string(n_users) + " users exceeds the limit of " +
                                std::to_string(kOracleMaxUsers));
  }
  return detail::search_eta_product(Method::Oracle, oracle_candidates(curve, grid_points_per_segment),
                                    false, channel, curve, params, options.jobs);
}

}  // namespace pscom
