#pragma once

#include "tvbo/acquisition.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tvbo {

enum class Regime { Stationary, Moderate, Fast };

enum class EnvironmentKind { SyntheticBilevel, QuadraticLowerLevel, OpponentDrift };

struct EnvironmentSpec {
    EnvironmentKind kind = EnvironmentKind::SyntheticBilevel;
    Regime regime = Regime::Stationary; // synthetic_bilevel only
    double sigma2 = 0.01;               // observation noise variance
    double alpha = 1.0;                 // drift exponent
    int input_dim = 1;
    int output_dim = 2;

    // quadratic_lower_level
    double mu = 2.0;                 // strong convexity of the lower level
    std::string target_map = "affine";
    double y_lo = -3.0, y_hi = 3.0;  // lower-level box per coordinate

    // opponent_drift
    Eigen::VectorXd theta0;
    double lipschitz_g = 1.0;
    double drift_sigma2 = 0.01; // 0 freezes the opponent

    void validate() const; // throws ConfigError
};

// f(x, y) = -sum_i (x_i - 1/2)^2 - ||y||^2 / 2, the benchmark upper-level
// reward. Concave and separable in y with peak 0.
double benchmark_reward(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Lower-level objective accessed through its y-gradient; strong convexity mu
// and gradient smoothness L drive the projected-gradient solver.
struct LowerLevelObjective {
    std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& y)>
        grad_y;
    double strong_convexity = 1.0;
    double smoothness = 1.0;
    Eigen::VectorXd box_lo;
    Eigen::VectorXd box_hi;
};

// Projected gradient descent with step 1/L until the projected-gradient norm
// drops to tol; the result is within tol/mu of the unique minimizer. Throws
// NumericalError when the iteration cap is hit.
Eigen::VectorXd solve_lower_level(const LowerLevelObjective& objective,
                                  const Eigen::VectorXd& x, Eigen::VectorXd y0,
                                  double tol, int max_iters = 100000);

// One opponent jump over dt steps: theta + N(0, (sigma2/L_g^2) dt^alpha) per
// coordinate. dt = 0 leaves theta untouched without consuming randomness.
Eigen::VectorXd drift_opponent(const Eigen::VectorXd& theta_prev, long dt,
                               double alpha, double sigma2, double lipschitz_g,
                               std::mt19937_64& rng);

// Runtime environment: an immutable spec plus the lazily generated opponent
// trajectory. One instance per run; instances are not shared across threads.
class Environment {
public:
    Environment(EnvironmentSpec spec, std::uint64_t evolution_seed);

    int input_dim() const { return spec_.input_dim; }
    int output_dim() const { return spec_.output_dim; }
    const EnvironmentSpec& spec() const { return spec_; }

    // Noiseless response map value at time t.
    Eigen::VectorXd response(const Eigen::VectorXd& x, long t) const;

    // response + N(0, sigma2 I), drawn from the caller's noise stream.
    Eigen::VectorXd observe(const Eigen::VectorXd& x, long t,
                            std::mt19937_64& noise_rng) const;

    // Grid argmax of f(x, response(x, t)); lowest-index tie-breaking.
    std::pair<Eigen::VectorXd, double> oracle_optimum(long t,
                                                      const DecisionGrid& grid) const;

    // Opponent type at time t (opponent_drift only); theta(0) == theta0.
    const Eigen::VectorXd& theta(long t) const;

    // Benchmark reward bound to this environment's dimensions.
    RewardSpec reward_spec(int inner_resolution = 64) const;

private:
    Eigen::VectorXd lower_level_target(const Eigen::VectorXd& x) const;

    EnvironmentSpec spec_;
    mutable std::vector<Eigen::VectorXd> theta_path_;
    mutable std::mt19937_64 drift_rng_;
};

} // namespace tvbo
