#pragma once

#include "tvbo/kernels.hpp"

#include <vector>

namespace tvbo {

// Length of the window opening at t_j: floor(t_j^{alpha_tilde/alpha}) + 1.
// This is the unique integer L with t_j^r < L <= t_j^r + 1, including when
// t_j^r is itself an integer. Throws std::invalid_argument when alpha == 0
// (stationary environments bypass windowing).
long next_window_length(long t_j, double alpha, double alpha_tilde);

// Effective noise variance of an observation taken at t_obs when used at
// t_now: sigma2 * (1 + lag^alpha). Exactly sigma2 at lag 0.
double variance_proxy(long t_obs, long t_now, double sigma2, double alpha);

// Lazily grown partition of {1, 2, ...} into consecutive windows.
class WindowSchedule {
public:
    WindowSchedule(double alpha, double alpha_tilde);

    bool is_window_start(long t);

    // 1-based index of the window containing t.
    long window_index(long t);

    const std::vector<long>& starts() const { return starts_; }

private:
    void extend_past(long t);

    double alpha_;
    double alpha_tilde_;
    std::vector<long> starts_;
};

// Largest admissible user exponent for the given kernel and input dimension:
// 1/3 for SE, (2 nu - d(d+1)) / (4 nu + 2 d(d+1)) for Matern. May be <= 0,
// in which case no positive alpha_tilde is admissible. Used for config
// warnings, never as a hard gate.
double admissible_alpha_tilde(const KernelSpec& kernel, int input_dim);

} // namespace tvbo
