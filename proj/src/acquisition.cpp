#include "tvbo/acquisition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvbo {

DecisionGrid DecisionGrid::uniform(const Eigen::VectorXd& low,
                                   const Eigen::VectorXd& high, int resolution) {
    if (resolution < 2)
        throw std::invalid_argument("DecisionGrid: resolution must be >= 2");
    if (low.size() != high.size() || low.size() < 1)
        throw std::invalid_argument("DecisionGrid: bounds dimension mismatch");
    for (Eigen::Index i = 0; i < low.size(); ++i)
        if (!(low(i) < high(i)))
            throw std::invalid_argument("DecisionGrid: low must be < high");

    DecisionGrid grid;
    grid.low = low;
    grid.high = high;
    grid.resolution = resolution;
    const int d = grid.dim();
    long total = 1;
    for (int k = 0; k < d; ++k)
        total *= resolution;
    grid.points.reserve(static_cast<size_t>(total));
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (long p = 0; p < total; ++p) {
        Eigen::VectorXd pt(d);
        for (int k = 0; k < d; ++k)
            pt(k) = low(k) + (high(k) - low(k)) * idx[static_cast<size_t>(k)] /
                                 (resolution - 1);
        grid.points.push_back(std::move(pt));
        for (int k = d - 1; k >= 0; --k) { // last axis fastest
            if (++idx[static_cast<size_t>(k)] < resolution)
                break;
            idx[static_cast<size_t>(k)] = 0;
        }
    }
    return grid;
}

double DecisionGrid::max_gap() const {
    double sq = 0.0;
    for (Eigen::Index k = 0; k < low.size(); ++k) {
        const double h = (high(k) - low(k)) / (resolution - 1);
        sq += 0.25 * h * h;
    }
    return std::sqrt(sq);
}

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Exhaustive search over an inner_resolution^m raster of the box;
// lexicographic order, lowest index wins ties.
InnerResult grid_extremum(const RewardSpec& reward, const Eigen::VectorXd& x,
                          const ConfidenceBox& box, bool maximize) {
    const auto m = box.lcb.size();
    if (m > 2)
        throw ConfigError("inner optimization: General structure supports m <= 2 only");
    const int res = reward.inner_resolution;
    auto coord = [&](Eigen::Index i, int step) {
        if (box.ucb(i) == box.lcb(i))
            return box.lcb(i);
        return box.lcb(i) + (box.ucb(i) - box.lcb(i)) * step / (res - 1);
    };
    InnerResult best;
    best.value = maximize ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
    Eigen::VectorXd y(m);
    const int outer = (m == 2) ? res : 1;
    for (int a = 0; a < outer; ++a) {
        if (m == 2)
            y(0) = coord(0, a);
        for (int b = 0; b < res; ++b) {
            y(m - 1) = coord(m - 1, b);
            const double v = reward.f(x, y);
            const bool better = maximize ? v > best.value : v < best.value;
            if (better) {
                best.value = v;
                best.y = y;
            }
        }
    }
    return best;
}

} // namespace

InnerResult inner_max_over_box(const RewardSpec& reward, const Eigen::VectorXd& x,
                               const ConfidenceBox& box) {
    if (reward.structure == RewardStructure::General)
        return grid_extremum(reward, x, box, /*maximize=*/true);
    // Concave and separable in y: clamp the unconstrained peak into the box.
    const auto m = box.lcb.size();
    InnerResult out;
    out.y.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double peak = reward.y_peak.size() > i ? reward.y_peak(i) : 0.0;
        out.y(i) = clamp(peak, box.lcb(i), box.ucb(i));
    }
    out.value = reward.f(x, out.y);
    return out;
}

InnerResult inner_min_over_box(const RewardSpec& reward, const Eigen::VectorXd& x,
                               const ConfidenceBox& box) {
    if (reward.structure == RewardStructure::General)
        return grid_extremum(reward, x, box, /*maximize=*/false);
    // Concave in y, so the minimum sits on a corner; enumerate all 2^m.
    const auto m = box.lcb.size();
    if (m > 30)
        throw std::invalid_argument("inner_min_over_box: output dimension too large");
    InnerResult best;
    best.value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd y(m);
    const unsigned corners = 1u << m;
    for (unsigned mask = 0; mask < corners; ++mask) {
        for (Eigen::Index i = 0; i < m; ++i)
            y(i) = (mask >> i) & 1u ? box.ucb(i) : box.lcb(i);
        const double v = reward.f(x, y);
        if (v < best.value) {
            best.value = v;
            best.y = y;
        }
    }
    return best;
}

ActionChoice select_action(const PosteriorModel& model, double beta,
                           const RewardSpec& reward, const DecisionGrid& grid) {
    Eigen::MatrixXd means;
    Eigen::VectorXd stds;
    model.predict_many(grid.points, means, stds);
    ActionChoice choice{-1, {}, -std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < grid.points.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const ConfidenceBox box = make_box(
            means.col(col), Eigen::VectorXd::Constant(means.rows(), stds(col)), beta);
        const double v = inner_max_over_box(reward, grid.points[i], box).value;
        if (v > choice.value) {
            choice.value = v;
            choice.index = static_cast<int>(i);
        }
    }
    choice.x = grid.points[static_cast<size_t>(choice.index)];
    return choice;
}

double regret_width_diagnostic(const PosteriorModel& model, double beta,
                               const RewardSpec& reward, const Eigen::VectorXd& x) {
    const ConfidenceBox box = confidence_box(model, x, beta);
    return inner_max_over_box(reward, x, box).value -
           inner_min_over_box(reward, x, box).value;
}

} // namespace tvbo
