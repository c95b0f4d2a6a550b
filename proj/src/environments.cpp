#include "tvbo/environments.hpp"

#include "tvbo/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tvbo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

void EnvironmentSpec::validate() const {
    if (!(sigma2 > 0.0))
        throw ConfigError("environment.sigma2 must be > 0");
    if (alpha < 0.0)
        throw ConfigError("environment.alpha must be >= 0");
    switch (kind) {
    case EnvironmentKind::SyntheticBilevel:
        if (input_dim != 1 || output_dim != 2)
            throw ConfigError("synthetic_bilevel is defined for input_dim=1, output_dim=2");
        break;
    case EnvironmentKind::QuadraticLowerLevel:
        if (!(mu > 0.0))
            throw ConfigError("environment.mu must be > 0");
        if (!(y_lo < y_hi))
            throw ConfigError("environment lower-level box must satisfy y_lo < y_hi");
        if (target_map != "affine")
            throw ConfigError("environment.target_map: unknown id '" + target_map + "'");
        break;
    case EnvironmentKind::OpponentDrift:
        if (output_dim != 1)
            throw ConfigError("opponent_drift is scalar-response (output_dim=1)");
        if (theta0.size() < 1)
            throw ConfigError("environment.theta0 must be non-empty");
        if (!(lipschitz_g > 0.0))
            throw ConfigError("environment.lipschitz_g must be > 0");
        if (drift_sigma2 < 0.0)
            throw ConfigError("environment.drift_sigma2 must be >= 0");
        break;
    }
}

double benchmark_reward(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        v -= (x(i) - 0.5) * (x(i) - 0.5);
    return v - 0.5 * y.squaredNorm();
}

Eigen::VectorXd solve_lower_level(const LowerLevelObjective& objective,
                                  const Eigen::VectorXd& x, Eigen::VectorXd y0,
                                  double tol, int max_iters) {
    if (!(objective.strong_convexity > 0.0))
        throw std::invalid_argument("solve_lower_level: mu must be > 0");
    if (!(objective.smoothness > 0.0))
        throw std::invalid_argument("solve_lower_level: smoothness must be > 0");
    const double step = 1.0 / objective.smoothness;
    Eigen::VectorXd y = std::move(y0);
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd g = objective.grad_y(x, y);
        const Eigen::VectorXd proposal = (y - step * g)
                                             .cwiseMax(objective.box_lo)
                                             .cwiseMin(objective.box_hi);
        if ((y - proposal).norm() * objective.smoothness <= tol)
            return y;
        y = proposal;
    }
    throw NumericalError("solve_lower_level: iteration cap exceeded");
}

Eigen::VectorXd drift_opponent(const Eigen::VectorXd& theta_prev, long dt,
                               double alpha, double sigma2, double lipschitz_g,
                               std::mt19937_64& rng) {
    if (dt < 0)
        throw std::invalid_argument("drift_opponent: dt must be >= 0");
    const double var =
        dt == 0 ? 0.0
                : (sigma2 / (lipschitz_g * lipschitz_g)) *
                      std::pow(static_cast<double>(dt), alpha);
    if (var == 0.0)
        return theta_prev;
    std::normal_distribution<double> jump(0.0, std::sqrt(var));
    Eigen::VectorXd theta = theta_prev;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta(i) += jump(rng);
    return theta;
}

Environment::Environment(EnvironmentSpec spec, std::uint64_t evolution_seed)
    : spec_(std::move(spec)), drift_rng_(evolution_seed) {
    spec_.validate();
    if (spec_.kind == EnvironmentKind::OpponentDrift)
        theta_path_.push_back(spec_.theta0);
}

const Eigen::VectorXd& Environment::theta(long t) const {
    if (spec_.kind != EnvironmentKind::OpponentDrift)
        throw std::logic_error("Environment::theta: not an opponent_drift environment");
    while (static_cast<long>(theta_path_.size()) <= t)
        theta_path_.push_back(drift_opponent(theta_path_.back(), 1, spec_.alpha,
                                             spec_.drift_sigma2, spec_.lipschitz_g,
                                             drift_rng_));
    return theta_path_[static_cast<size_t>(t)];
}

Eigen::VectorXd Environment::lower_level_target(const Eigen::VectorXd& x) const {
    const double xm = x.mean();
    Eigen::VectorXd h(spec_.output_dim);
    for (int i = 0; i < spec_.output_dim; ++i)
        h(i) = (i % 2 == 0) ? xm : 1.0 - xm;
    return h;
}

Eigen::VectorXd Environment::response(const Eigen::VectorXd& x, long t) const {
    switch (spec_.kind) {
    case EnvironmentKind::SyntheticBilevel: {
        const double xv = x(0);
        const double td = static_cast<double>(t);
        Eigen::VectorXd y(2);
        switch (spec_.regime) {
        case Regime::Stationary:
            y << std::sin(kTwoPi * xv), std::cos(kTwoPi * xv);
            break;
        case Regime::Moderate:
            y << std::sin(kTwoPi * xv + 0.5 * td), std::cos(kTwoPi * xv - 0.03 * td);
            break;
        case Regime::Fast:
            if (xv < 0.5)
                y << 2.0 * xv + 0.2 * std::sqrt(td), -2.0 * xv + 0.1 * td;
            else
                y << -2.0 * xv + 2.0 + 0.2 * std::sqrt(td), 2.0 * xv - 2.0 + 0.1 * td;
            break;
        }
        return y;
    }
    case EnvironmentKind::QuadraticLowerLevel: {
        LowerLevelObjective objective;
        objective.strong_convexity = spec_.mu;
        objective.smoothness = spec_.mu; // isotropic quadratic
        objective.box_lo = Eigen::VectorXd::Constant(spec_.output_dim, spec_.y_lo);
        objective.box_hi = Eigen::VectorXd::Constant(spec_.output_dim, spec_.y_hi);
        const double mu = spec_.mu;
        objective.grad_y = [this, mu](const Eigen::VectorXd& xq,
                                      const Eigen::VectorXd& y) {
            return (mu * (y - lower_level_target(xq))).eval();
        };
        return solve_lower_level(objective, x,
                                 Eigen::VectorXd::Zero(spec_.output_dim), 1e-9);
    }
    case EnvironmentKind::OpponentDrift: {
        const Eigen::VectorXd& th = theta(t);
        Eigen::VectorXd y(1);
        y(0) = std::sin(kTwoPi * x.mean()) * (1.0 + 0.1 * th.norm());
        return y;
    }
    }
    throw std::logic_error("Environment::response: unknown kind");
}

Eigen::VectorXd Environment::observe(const Eigen::VectorXd& x, long t,
                                     std::mt19937_64& noise_rng) const {
    Eigen::VectorXd y = response(x, t);
    std::normal_distribution<double> noise(0.0, std::sqrt(spec_.sigma2));
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y(i) += noise(noise_rng);
    return y;
}

std::pair<Eigen::VectorXd, double>
Environment::oracle_optimum(long t, const DecisionGrid& grid) const {
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < grid.points.size(); ++i) {
        const double v = benchmark_reward(grid.points[i], response(grid.points[i], t));
        if (v > best_value) {
            best_value = v;
            best = static_cast<int>(i);
        }
    }
    return {grid.points[static_cast<size_t>(best)], best_value};
}

RewardSpec Environment::reward_spec(int inner_resolution) const {
    RewardSpec reward;
    reward.f = benchmark_reward;
    reward.structure = RewardStructure::SeparableConcaveInY;
    reward.y_peak = Eigen::VectorXd::Zero(spec_.output_dim);
    reward.inner_resolution = inner_resolution;
    // |df/dx_i| <= 1 on [0,1]; |df/dy_i| <= max |y_i| over the lower-level box.
    reward.lipschitz = std::max(1.0, std::max(std::abs(spec_.y_lo), std::abs(spec_.y_hi)));
    return reward;
}

} // namespace tvbo
