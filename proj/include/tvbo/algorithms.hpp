#pragma once

#include "tvbo/dpp.hpp"
#include "tvbo/environments.hpp"
#include "tvbo/window.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace tvbo {

enum class AlgorithmKind { GpUcb, GpUcbl, WSparqBl, WSparqSeqGame, Hedge, Exp3 };

std::string to_string(AlgorithmKind kind);
AlgorithmKind algorithm_kind_from_string(const std::string& name);

struct AlgorithmConfig {
    AlgorithmKind kind = AlgorithmKind::WSparqBl;
    std::string name; // output label; defaults to the kind's canonical name

    // GP learners
    KernelSpec kernel;
    double rkhs_bound = 2.0;
    double delta = 0.1;
    BetaDenominator beta_denominator = BetaDenominator::Sigma;

    // windowed learners
    double alpha_tilde = 0.08;
    double query_budget_scale = 1.0;
    enum class GroundSet { Window, FullHistory };
    GroundSet dpp_ground_set = GroundSet::Window;

    // arm baselines
    double eta = 0.1;
    double reward_lo = -5.0; // EXP3 importance-weight scaling range
    double reward_hi = 0.0;

    std::string label() const;
};

// Per-step record returned by a learner: the action played, the observation
// received, and the bookkeeping the trace needs.
struct StepRecord {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    double beta = 0.0;
    long additional_queries = 0;
    long window_id = 0;
};

class Learner {
public:
    virtual ~Learner() = default;
    virtual StepRecord step(const Environment& env, std::mt19937_64& obs_rng,
                            long t) = 0;

    // Introspection for tests and diagnostics; GP learners override.
    virtual const PosteriorModel* model() const { return nullptr; }
    virtual const ObservationSet* dataset() const { return nullptr; }
};

// Window-refresh bookkeeping kept by windowed learners.
struct RefreshEvent {
    long t = 0;
    long candidates = 0;
    long distinct_candidates = 0;
    long budget = 0;
    long selected = 0;
};

// GP-based optimistic learners. GpUcb/GpUcbl fit all history with constant
// noise sigma2; WSparqBl/WSparqSeqGame maintain a windowed dataset with
// lag-dependent proxies and DPP re-queries at window starts.
class GpBanditLearner : public Learner {
public:
    GpBanditLearner(const AlgorithmConfig& config, const EnvironmentSpec& env_spec,
                    DecisionGrid grid);

    StepRecord step(const Environment& env, std::mt19937_64& obs_rng,
                    long t) override;

    const PosteriorModel* model() const override { return &model_; }
    const ObservationSet* dataset() const override { return &data_; }
    const std::vector<RefreshEvent>& refresh_log() const { return refresh_log_; }

private:
    bool windowed() const {
        return config_.kind == AlgorithmKind::WSparqBl ||
               config_.kind == AlgorithmKind::WSparqSeqGame;
    }

    AlgorithmConfig config_;
    double sigma2_;
    double alpha_;
    int output_dim_;
    DecisionGrid grid_;
    RewardSpec reward_;
    ObservationSet data_;
    std::optional<WindowSchedule> schedule_;
    PosteriorModel model_;
    std::vector<Eigen::VectorXd> played_; // FullHistory DPP ground set
    std::vector<RefreshEvent> refresh_log_;

    struct Pending {
        Eigen::VectorXd x, y;
        long t;
    };
    std::optional<Pending> pending_;
};

// Multiplicative-weights baselines over the grid arms. Hedge updates every
// arm from noiseless full information; Exp3 updates only the played arm with
// an importance-weighted, range-rescaled reward.
class MultiplicativeWeightsLearner : public Learner {
public:
    MultiplicativeWeightsLearner(const AlgorithmConfig& config, DecisionGrid grid,
                                 std::uint64_t learner_seed);

    StepRecord step(const Environment& env, std::mt19937_64& obs_rng,
                    long t) override;

    const Eigen::VectorXd& log_weights() const { return log_weights_; }

private:
    AlgorithmConfig config_;
    DecisionGrid grid_;
    Eigen::VectorXd log_weights_;
    std::mt19937_64 rng_;
};

// Per-step regret accounting for a whole run.
struct RegretTrace {
    int input_dim = 0;
    int output_dim = 0;
    std::vector<long> t;
    std::vector<long> window_id;
    std::vector<Eigen::VectorXd> x;
    std::vector<Eigen::VectorXd> y;
    std::vector<double> instant_regret;
    std::vector<double> cumulative_regret;
    std::vector<long> additional_queries; // cumulative N_t
    std::vector<double> beta;
    std::vector<Eigen::VectorXd> theta; // opponent_drift runs only; not serialized

    long horizon() const { return static_cast<long>(t.size()); }
};

std::unique_ptr<Learner> make_learner(const AlgorithmConfig& config,
                                      const EnvironmentSpec& env_spec,
                                      const DecisionGrid& grid,
                                      std::uint64_t learner_seed);

using StepObserver = std::function<void(long t, const Learner&, const StepRecord&)>;

// Core loop: per step the learner acts, the oracle optimum is computed on the
// grid, and regret is charged on noiseless response values.
RegretTrace run_with_learner(Learner& learner, const Environment& env,
                             const DecisionGrid& grid, long horizon,
                             std::mt19937_64& obs_rng,
                             const StepObserver& observer = nullptr);

// Seeded end-to-end episode. The seed expands into three independent streams:
// observation noise, environment evolution, and learner randomness.
RegretTrace run_episode(const AlgorithmConfig& config, const EnvironmentSpec& env_spec,
                        const DecisionGrid& grid, long horizon, std::uint64_t seed);

// Query-count-only dry run of the window/budget schedule: sum of per-window
// budgets over all window starts <= horizon, with no GP in the loop.
long count_scheduled_queries(long horizon, double alpha, double alpha_tilde,
                             const KernelSpec& kernel, int input_dim, double scale);

// Deterministic per-run stream derivation (FNV-1a over seed, label, index).
std::uint64_t derive_run_seed(std::uint64_t master_seed, const std::string& algo_label,
                              std::uint64_t seed_index);

} // namespace tvbo
