#include "tvbo/algorithms.hpp"

#include "tvbo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvbo {

std::string to_string(AlgorithmKind kind) {
    switch (kind) {
    case AlgorithmKind::GpUcb: return "gp_ucb";
    case AlgorithmKind::GpUcbl: return "gp_ucbl";
    case AlgorithmKind::WSparqBl: return "wsparq_bl";
    case AlgorithmKind::WSparqSeqGame: return "wsparq_seqgame";
    case AlgorithmKind::Hedge: return "hedge";
    case AlgorithmKind::Exp3: return "exp3";
    }
    throw std::logic_error("to_string: unknown algorithm kind");
}

AlgorithmKind algorithm_kind_from_string(const std::string& name) {
    if (name == "gp_ucb") return AlgorithmKind::GpUcb;
    if (name == "gp_ucbl") return AlgorithmKind::GpUcbl;
    if (name == "wsparq_bl") return AlgorithmKind::WSparqBl;
    if (name == "wsparq_seqgame") return AlgorithmKind::WSparqSeqGame;
    if (name == "hedge") return AlgorithmKind::Hedge;
    if (name == "exp3") return AlgorithmKind::Exp3;
    throw ConfigError("unknown algorithm kind '" + name + "'");
}

std::string AlgorithmConfig::label() const {
    return name.empty() ? to_string(kind) : name;
}

GpBanditLearner::GpBanditLearner(const AlgorithmConfig& config,
                                 const EnvironmentSpec& env_spec, DecisionGrid grid)
    : config_(config), sigma2_(env_spec.sigma2), alpha_(env_spec.alpha),
      output_dim_(env_spec.output_dim), grid_(std::move(grid)),
      data_(env_spec.output_dim),
      model_(PosteriorModel::prior(config.kernel, env_spec.output_dim)) {
    config_.kernel.validate();
    Environment probe(env_spec, 0);
    reward_ = probe.reward_spec();
    if (windowed())
        schedule_.emplace(alpha_, config_.alpha_tilde);
    if (config_.kind == AlgorithmKind::WSparqSeqGame &&
        env_spec.kind != EnvironmentKind::OpponentDrift)
        throw ConfigError("wsparq_seqgame requires an opponent_drift environment");
}

StepRecord GpBanditLearner::step(const Environment& env, std::mt19937_64& obs_rng,
                                 long t) {
    // Fold in the previous step's observation before any window refresh so it
    // is part of the refresh candidate set.
    if (pending_) {
        data_.append(pending_->x, pending_->y, pending_->t, sigma2_);
        pending_.reset();
    }

    long queries = 0;
    if (windowed() && schedule_->is_window_start(t) && !data_.empty()) {
        const long budget =
            query_budget(t, config_.kernel, grid_.dim(), config_.query_budget_scale);
        const std::vector<Eigen::VectorXd>& candidates =
            config_.dpp_ground_set == AlgorithmConfig::GroundSet::FullHistory
                ? played_
                : data_.inputs;
        std::vector<int> picked = greedy_dpp_select(config_.kernel, candidates, budget);
        std::sort(picked.begin(), picked.end());

        long distinct = 0;
        for (size_t i = 0; i < candidates.size(); ++i) {
            bool fresh = true;
            for (size_t j = 0; j < i && fresh; ++j)
                if ((candidates[i] - candidates[j]).norm() <= kDppGainFloor)
                    fresh = false;
            if (fresh)
                ++distinct;
        }
        refresh_log_.push_back({t, static_cast<long>(candidates.size()), distinct,
                                budget, static_cast<long>(picked.size())});

        ObservationSet refreshed(output_dim_);
        for (int idx : picked) {
            const Eigen::VectorXd& xq = candidates[static_cast<size_t>(idx)];
            refreshed.append(xq, env.observe(xq, t, obs_rng), t, sigma2_);
        }
        queries = static_cast<long>(picked.size());
        data_ = std::move(refreshed);
    }

    if (windowed())
        for (int i = 0; i < data_.size(); ++i)
            data_.variance_proxies[static_cast<size_t>(i)] = variance_proxy(
                data_.acquired_at[static_cast<size_t>(i)], t, sigma2_, alpha_);

    model_ = PosteriorModel::fit(config_.kernel, data_);
    const double beta = beta_value(model_, data_, config_.delta, config_.rkhs_bound,
                                   output_dim_, config_.beta_denominator);
    const ActionChoice choice = select_action(model_, beta, reward_, grid_);
    const Eigen::VectorXd y = env.observe(choice.x, t, obs_rng);

    pending_ = Pending{choice.x, y, t};
    if (config_.dpp_ground_set == AlgorithmConfig::GroundSet::FullHistory)
        played_.push_back(choice.x);

    StepRecord record;
    record.x = choice.x;
    record.y = y;
    record.beta = beta;
    record.additional_queries = queries;
    record.window_id = windowed() ? schedule_->window_index(t) : 0;
    return record;
}

MultiplicativeWeightsLearner::MultiplicativeWeightsLearner(
    const AlgorithmConfig& config, DecisionGrid grid, std::uint64_t learner_seed)
    : config_(config), grid_(std::move(grid)),
      log_weights_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_.points.size()))),
      rng_(learner_seed) {
    if (config_.eta < 0.0)
        throw ConfigError("eta must be >= 0");
    if (!(config_.reward_hi > config_.reward_lo))
        throw ConfigError("reward range must satisfy reward_lo < reward_hi");
}

StepRecord MultiplicativeWeightsLearner::step(const Environment& env,
                                              std::mt19937_64& obs_rng, long t) {
    const auto n_arms = log_weights_.size();
    Eigen::VectorXd probs =
        (log_weights_.array() - log_weights_.maxCoeff()).exp().matrix();
    probs /= probs.sum();

    // Inverse-CDF draw keeps arm sampling independent of library internals.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng_);
    Eigen::Index arm = n_arms - 1;
    double cum = 0.0;
    for (Eigen::Index i = 0; i < n_arms; ++i) {
        cum += probs(i);
        if (u <= cum) {
            arm = i;
            break;
        }
    }

    const Eigen::VectorXd& x = grid_.points[static_cast<size_t>(arm)];
    const Eigen::VectorXd y = env.observe(x, t, obs_rng);

    if (config_.kind == AlgorithmKind::Hedge) {
        for (Eigen::Index i = 0; i < n_arms; ++i) {
            const Eigen::VectorXd& xi = grid_.points[static_cast<size_t>(i)];
            log_weights_(i) += config_.eta * benchmark_reward(xi, env.response(xi, t));
        }
    } else {
        const double reward = benchmark_reward(x, y);
        const double scaled =
            (reward - config_.reward_lo) / (config_.reward_hi - config_.reward_lo);
        log_weights_(arm) += config_.eta * scaled / probs(arm);
    }
    log_weights_.array() -= log_weights_.maxCoeff(); // normalize in log-domain

    StepRecord record;
    record.x = x;
    record.y = y;
    return record;
}

std::unique_ptr<Learner> make_learner(const AlgorithmConfig& config,
                                      const EnvironmentSpec& env_spec,
                                      const DecisionGrid& grid,
                                      std::uint64_t learner_seed) {
    switch (config.kind) {
    case AlgorithmKind::GpUcb:
    case AlgorithmKind::GpUcbl:
    case AlgorithmKind::WSparqBl:
    case AlgorithmKind::WSparqSeqGame:
        return std::make_unique<GpBanditLearner>(config, env_spec, grid);
    case AlgorithmKind::Hedge:
    case AlgorithmKind::Exp3:
        return std::make_unique<MultiplicativeWeightsLearner>(config, grid,
                                                              learner_seed);
    }
    throw std::logic_error("make_learner: unknown algorithm kind");
}

RegretTrace run_with_learner(Learner& learner, const Environment& env,
                             const DecisionGrid& grid, long horizon,
                             std::mt19937_64& obs_rng, const StepObserver& observer) {
    if (horizon < 1)
        throw std::invalid_argument("run_with_learner: horizon must be >= 1");
    RegretTrace trace;
    trace.input_dim = env.input_dim();
    trace.output_dim = env.output_dim();
    double cumulative = 0.0;
    long n_queries = 0;
    for (long t = 1; t <= horizon; ++t) {
        const StepRecord record = learner.step(env, obs_rng, t);
        const auto [x_star, f_star] = env.oracle_optimum(t, grid);
        const double f_played =
            benchmark_reward(record.x, env.response(record.x, t));
        const double r = f_star - f_played;
        cumulative += r;
        n_queries += record.additional_queries;

        trace.t.push_back(t);
        trace.window_id.push_back(record.window_id);
        trace.x.push_back(record.x);
        trace.y.push_back(record.y);
        trace.instant_regret.push_back(r);
        trace.cumulative_regret.push_back(cumulative);
        trace.additional_queries.push_back(n_queries);
        trace.beta.push_back(record.beta);
        if (env.spec().kind == EnvironmentKind::OpponentDrift)
            trace.theta.push_back(env.theta(t));
        if (observer)
            observer(t, learner, record);
    }
    return trace;
}

namespace {

// splitmix64; expands one run seed into the per-purpose streams.
std::uint64_t split_seed(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

RegretTrace run_episode(const AlgorithmConfig& config, const EnvironmentSpec& env_spec,
                        const DecisionGrid& grid, long horizon, std::uint64_t seed) {
    std::uint64_t state = seed;
    const std::uint64_t obs_seed = split_seed(state);
    const std::uint64_t evolution_seed = split_seed(state);
    const std::uint64_t learner_seed = split_seed(state);

    Environment env(env_spec, evolution_seed);
    std::mt19937_64 obs_rng(obs_seed);
    auto learner = make_learner(config, env_spec, grid, learner_seed);
    return run_with_learner(*learner, env, grid, horizon, obs_rng);
}

long count_scheduled_queries(long horizon, double alpha, double alpha_tilde,
                             const KernelSpec& kernel, int input_dim, double scale) {
    long total = 0;
    long start = 1;
    while (start <= horizon) {
        total += query_budget(start, kernel, input_dim, scale);
        start += next_window_length(start, alpha, alpha_tilde);
    }
    return total;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, const std::string& algo_label,
                              std::uint64_t seed_index) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a 64
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte & 0xffULL;
        h *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i)
        mix(master_seed >> (8 * i));
    for (char c : algo_label)
        mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    for (int i = 0; i < 8; ++i)
        mix(seed_index >> (8 * i));
    return h;
}

} // namespace tvbo
