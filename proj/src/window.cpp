#include "tvbo/window.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvbo {

long next_window_length(long t_j, double alpha, double alpha_tilde) {
    if (t_j < 1)
        throw std::invalid_argument("next_window_length: t_j must be >= 1");
    if (!(alpha > 0.0))
        throw std::invalid_argument("next_window_length: alpha must be > 0");
    if (!(alpha_tilde > 0.0))
        throw std::invalid_argument("next_window_length: alpha_tilde must be > 0");
    const double r = alpha_tilde / alpha;
    return static_cast<long>(std::floor(std::pow(static_cast<double>(t_j), r))) + 1;
}

double variance_proxy(long t_obs, long t_now, double sigma2, double alpha) {
    if (t_obs > t_now)
        throw std::invalid_argument("variance_proxy: observation is in the future");
    const long lag = t_now - t_obs;
    if (lag == 0)
        return sigma2;
    return sigma2 * (1.0 + std::pow(static_cast<double>(lag), alpha));
}

WindowSchedule::WindowSchedule(double alpha, double alpha_tilde)
    : alpha_(alpha), alpha_tilde_(alpha_tilde) {
    next_window_length(1, alpha, alpha_tilde); // validate exponents
    starts_.push_back(1);
}

void WindowSchedule::extend_past(long t) {
    while (starts_.back() <= t)
        starts_.push_back(starts_.back() +
                          next_window_length(starts_.back(), alpha_, alpha_tilde_));
}

bool WindowSchedule::is_window_start(long t) {
    if (t < 1)
        throw std::invalid_argument("is_window_start: t must be >= 1");
    extend_past(t);
    return std::binary_search(starts_.begin(), starts_.end(), t);
}

long WindowSchedule::window_index(long t) {
    if (t < 1)
        throw std::invalid_argument("window_index: t must be >= 1");
    extend_past(t);
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    return static_cast<long>(it - starts_.begin());
}

double admissible_alpha_tilde(const KernelSpec& kernel, int input_dim) {
    if (kernel.family == KernelFamily::SquaredExponential)
        return 1.0 / 3.0;
    const double d = static_cast<double>(input_dim);
    return (2.0 * kernel.nu - d * (d + 1.0)) / (4.0 * kernel.nu + 2.0 * d * (d + 1.0));
}

} // namespace tvbo
