#pragma once

#include "tvbo/kernels.hpp"

#include <vector>

namespace tvbo {

// Marginal log-det gains below this are treated as zero; keeps duplicates
// (rank-deficient Gram extensions) out of the selection.
inline constexpr double kDppGainFloor = 1e-12;

// Greedy MAP subset selection: iteratively add the candidate with the largest
// marginal gain in log det of the selected Gram submatrix (equivalently, the
// largest posterior variance given the points selected so far). Deterministic,
// lowest-index tie-breaking, in greedy order. Stops early once every remaining
// gain falls below the floor, so at most min(budget, #distinct) indices are
// returned.
std::vector<int> greedy_dpp_select(const KernelSpec& kernel,
                                   const std::vector<Eigen::VectorXd>& candidates,
                                   long budget);

// Per-window re-query budget: ceil(scale * log^d t) for SE and
// ceil(scale * t^{2d/(2 nu - d)}) for Matern, floored at 1. Matern requires
// 2 nu > d; violations are a config-time error.
long query_budget(long t, const KernelSpec& kernel, int input_dim, double scale);

} // namespace tvbo
