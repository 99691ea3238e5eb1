#ifndef PSCOM_SRC_PRODUCT_SEARCH_HPP
#define PSCOM_SRC_PRODUCT_SEARCH_HPP

#include <chrono>

#include "pscom/solvers.hpp"

namespace pscom::detail {

/// Best fixed-eta bisection over a Cartesian product of per-user ratios.
/// With `shared` set, only the diagonal (all users equal) is searched.
SolveReport search_eta_product(Method method, const std::vector<double>& candidates,
                               bool shared, const ChannelState& channel,
                               const CompLoadCurve& curve, const SystemParams& params,
                               unsigned jobs);

double elapsed_ms(std::chrono::steady_clock::time_point start);

}  // namespace pscom::detail

#endif  // PSCOM_SRC_PRODUCT_SEARCH_HPP
