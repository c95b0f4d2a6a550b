#pragma once

#include "tvbo/gp.hpp"

#include <functional>
#include <vector>

namespace tvbo {

// Uniform inclusive grid over [low, high]^d, materialized up front. Points are
// ordered lexicographically with the last axis fastest; ties in any argmax
// over the grid are always broken toward the lowest index.
struct DecisionGrid {
    Eigen::VectorXd low;
    Eigen::VectorXd high;
    int resolution = 256;
    std::vector<Eigen::VectorXd> points;

    static DecisionGrid uniform(const Eigen::VectorXd& low,
                                const Eigen::VectorXd& high, int resolution);

    int dim() const { return static_cast<int>(low.size()); }
    double spacing() const { return (high(0) - low(0)) / (resolution - 1); }
    // Largest distance from any domain point to its nearest grid point.
    double max_gap() const;
};

enum class RewardStructure { SeparableConcaveInY, General };

// Known upper-level reward f(x, y). For SeparableConcaveInY, y_peak holds the
// unconstrained per-coordinate maximizer of y -> f(x, y) (independent of x),
// which makes box maximization a clamp and box minimization a corner search.
// The General fallback rasterizes the box and is limited to m <= 2.
struct RewardSpec {
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> f;
    RewardStructure structure = RewardStructure::SeparableConcaveInY;
    double lipschitz = 1.0;
    Eigen::VectorXd y_peak;
    int inner_resolution = 64;
};

struct InnerResult {
    Eigen::VectorXd y;
    double value;
};

InnerResult inner_max_over_box(const RewardSpec& reward, const Eigen::VectorXd& x,
                               const ConfidenceBox& box);
InnerResult inner_min_over_box(const RewardSpec& reward, const Eigen::VectorXd& x,
                               const ConfidenceBox& box);

struct ActionChoice {
    int index;
    Eigen::VectorXd x;
    double value;
};

// Optimistic rule: argmax over grid points of the best-case reward over the
// confidence box at that point.
ActionChoice select_action(const PosteriorModel& model, double beta,
                           const RewardSpec& reward, const DecisionGrid& grid);

// Best-case minus worst-case reward over the box at x; the instantaneous
// regret upper envelope.
double regret_width_diagnostic(const PosteriorModel& model, double beta,
                               const RewardSpec& reward, const Eigen::VectorXd& x);

} // namespace tvbo
