#include "tvbo/dpp.hpp"

#include "tvbo/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace tvbo {

std::vector<int> greedy_dpp_select(const KernelSpec& kernel,
                                   const std::vector<Eigen::VectorXd>& candidates,
                                   long budget) {
    const auto n = static_cast<Eigen::Index>(candidates.size());
    if (n == 0)
        throw std::invalid_argument("greedy_dpp_select: candidates must be non-empty");
    if (budget < 1)
        throw std::invalid_argument("greedy_dpp_select: budget must be >= 1");

    const auto k_max = static_cast<Eigen::Index>(std::min<long>(budget, n));
    // gains(i) tracks the conditional variance of candidate i given the
    // selection; rows of basis hold L^{-1} k_S(x_i) grown one column per pick.
    Eigen::VectorXd gains = Eigen::VectorXd::Constant(n, kernel.output_scale);
    Eigen::MatrixXd basis(n, k_max);
    std::vector<char> taken(static_cast<size_t>(n), 0);
    std::vector<int> selected;
    selected.reserve(static_cast<size_t>(k_max));

    for (Eigen::Index step = 0; step < k_max; ++step) {
        Eigen::Index best = -1;
        double best_gain = kDppGainFloor;
        for (Eigen::Index i = 0; i < n; ++i)
            if (!taken[static_cast<size_t>(i)] && gains(i) > best_gain) {
                best_gain = gains(i);
                best = i;
            }
        if (best < 0)
            break;
        const double scale = std::sqrt(best_gain);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (taken[static_cast<size_t>(i)])
                continue;
            double dot = 0.0;
            for (Eigen::Index c = 0; c < step; ++c)
                dot += basis(i, c) * basis(best, c);
            const double e =
                (kernel_eval(kernel, candidates[static_cast<size_t>(i)],
                             candidates[static_cast<size_t>(best)]) -
                 dot) /
                scale;
            basis(i, step) = e;
            gains(i) -= e * e;
        }
        taken[static_cast<size_t>(best)] = 1;
        selected.push_back(static_cast<int>(best));
    }
    return selected;
}

long query_budget(long t, const KernelSpec& kernel, int input_dim, double scale) {
    if (t < 1)
        throw std::invalid_argument("query_budget: t must be >= 1");
    if (!(scale > 0.0))
        throw std::invalid_argument("query_budget: scale must be > 0");
    const double d = static_cast<double>(input_dim);
    double raw = 0.0;
    if (kernel.family == KernelFamily::SquaredExponential) {
        raw = scale * std::pow(std::log(static_cast<double>(t)), d);
    } else {
        if (!(2.0 * kernel.nu > d))
            throw ConfigError("query_budget: Matern requires 2 nu > input_dim");
        raw = scale * std::pow(static_cast<double>(t), 2.0 * d / (2.0 * kernel.nu - d));
    }
    return std::max<long>(1, static_cast<long>(std::ceil(raw)));
}

} // namespace tvbo
