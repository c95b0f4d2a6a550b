#include "tvbo/harness.hpp"

#include "tvbo/errors.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

namespace tvbo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

template <typename T>
T require(const json& j, const std::string& field) {
    if (!j.contains(field))
        field_error(field, "missing");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception& e) {
        field_error(field, e.what());
    }
}

template <typename T>
T optional_field(const json& j, const std::string& field, T fallback) {
    if (!j.contains(field))
        return fallback;
    try {
        return j.at(field).get<T>();
    } catch (const json::exception& e) {
        field_error(field, e.what());
    }
}

KernelSpec parse_kernel(const json& j, const std::string& prefix) {
    KernelSpec kernel;
    const std::string family = optional_field<std::string>(j, "family", "matern");
    if (family == "matern")
        kernel.family = KernelFamily::Matern;
    else if (family == "squared_exponential" || family == "se")
        kernel.family = KernelFamily::SquaredExponential;
    else
        field_error(prefix + ".family", "expected 'matern' or 'squared_exponential'");
    kernel.nu = optional_field<double>(j, "nu", 1.5);
    kernel.lengthscale = optional_field<double>(j, "lengthscale", 0.2);
    kernel.output_scale = optional_field<double>(j, "output_scale", 1.0);
    try {
        kernel.validate();
    } catch (const std::invalid_argument& e) {
        field_error(prefix, e.what());
    }
    return kernel;
}

json kernel_to_json(const KernelSpec& kernel) {
    return {{"family", kernel.family == KernelFamily::Matern ? "matern"
                                                             : "squared_exponential"},
            {"nu", kernel.nu},
            {"lengthscale", kernel.lengthscale},
            {"output_scale", kernel.output_scale}};
}

EnvironmentSpec parse_environment(const json& j) {
    EnvironmentSpec env;
    const std::string kind = require<std::string>(j, "kind");
    if (kind == "synthetic_bilevel")
        env.kind = EnvironmentKind::SyntheticBilevel;
    else if (kind == "quadratic_lower_level")
        env.kind = EnvironmentKind::QuadraticLowerLevel;
    else if (kind == "opponent_drift")
        env.kind = EnvironmentKind::OpponentDrift;
    else
        field_error("environment.kind", "unknown kind '" + kind + "'");

    if (env.kind == EnvironmentKind::SyntheticBilevel) {
        const std::string regime = require<std::string>(j, "regime");
        if (regime == "stationary")
            env.regime = Regime::Stationary;
        else if (regime == "moderate")
            env.regime = Regime::Moderate;
        else if (regime == "fast")
            env.regime = Regime::Fast;
        else
            field_error("environment.regime",
                        "expected 'stationary', 'moderate' or 'fast'");
    }

    env.sigma2 = optional_field<double>(j, "sigma2", 0.01);
    env.alpha = optional_field<double>(j, "alpha", 1.0);
    env.input_dim = optional_field<int>(j, "input_dim", 1);
    env.output_dim = optional_field<int>(
        j, "output_dim", env.kind == EnvironmentKind::OpponentDrift ? 1 : 2);
    env.mu = optional_field<double>(j, "mu", 2.0);
    env.target_map = optional_field<std::string>(j, "target_map", "affine");
    env.y_lo = optional_field<double>(j, "y_lo", -3.0);
    env.y_hi = optional_field<double>(j, "y_hi", 3.0);
    env.lipschitz_g = optional_field<double>(j, "lipschitz_g", 1.0);
    env.drift_sigma2 = optional_field<double>(j, "drift_sigma2", env.sigma2);
    if (j.contains("theta0")) {
        const auto raw = require<std::vector<double>>(j, "theta0");
        env.theta0 = Eigen::Map<const Eigen::VectorXd>(raw.data(),
                                                       static_cast<long>(raw.size()));
    } else if (env.kind == EnvironmentKind::OpponentDrift) {
        env.theta0 = Eigen::Vector2d(1.0, 0.0);
    }
    env.validate();
    return env;
}

json environment_to_json(const EnvironmentSpec& env) {
    json j;
    switch (env.kind) {
    case EnvironmentKind::SyntheticBilevel: j["kind"] = "synthetic_bilevel"; break;
    case EnvironmentKind::QuadraticLowerLevel: j["kind"] = "quadratic_lower_level"; break;
    case EnvironmentKind::OpponentDrift: j["kind"] = "opponent_drift"; break;
    }
    if (env.kind == EnvironmentKind::SyntheticBilevel)
        j["regime"] = env.regime == Regime::Stationary ? "stationary"
                      : env.regime == Regime::Moderate ? "moderate"
                                                       : "fast";
    j["sigma2"] = env.sigma2;
    j["alpha"] = env.alpha;
    j["input_dim"] = env.input_dim;
    j["output_dim"] = env.output_dim;
    if (env.kind == EnvironmentKind::QuadraticLowerLevel) {
        j["mu"] = env.mu;
        j["target_map"] = env.target_map;
        j["y_lo"] = env.y_lo;
        j["y_hi"] = env.y_hi;
    }
    if (env.kind == EnvironmentKind::OpponentDrift) {
        j["lipschitz_g"] = env.lipschitz_g;
        j["drift_sigma2"] = env.drift_sigma2;
        j["theta0"] = std::vector<double>(env.theta0.data(),
                                          env.theta0.data() + env.theta0.size());
    }
    return j;
}

AlgorithmConfig parse_algorithm(const json& j, size_t index) {
    const std::string prefix = "algorithms[" + std::to_string(index) + "]";
    AlgorithmConfig algo;
    const std::string kind = require<std::string>(j, "kind");
    try {
        algo.kind = algorithm_kind_from_string(kind);
    } catch (const ConfigError& e) {
        field_error(prefix + ".kind", e.what());
    }
    algo.name = optional_field<std::string>(j, "name", kind);
    if (j.contains("kernel"))
        algo.kernel = parse_kernel(j.at("kernel"), prefix + ".kernel");
    algo.rkhs_bound = optional_field<double>(j, "B", 2.0);
    algo.delta = optional_field<double>(j, "delta", 0.1);
    algo.alpha_tilde = optional_field<double>(j, "alpha_tilde", 0.08);
    algo.query_budget_scale = optional_field<double>(j, "query_budget_scale", 1.0);
    algo.eta = optional_field<double>(j, "eta", 0.1);
    algo.reward_lo = optional_field<double>(j, "reward_lo", -5.0);
    algo.reward_hi = optional_field<double>(j, "reward_hi", 0.0);

    const std::string denom = optional_field<std::string>(j, "beta_denominator", "sigma");
    if (denom == "sigma" || denom == "Sigma")
        algo.beta_denominator = BetaDenominator::Sigma;
    else if (denom == "k" || denom == "K")
        algo.beta_denominator = BetaDenominator::K;
    else
        field_error(prefix + ".beta_denominator", "expected 'K' or 'Sigma'");

    const std::string ground = optional_field<std::string>(j, "dpp_ground_set", "window");
    if (ground == "window")
        algo.dpp_ground_set = AlgorithmConfig::GroundSet::Window;
    else if (ground == "full_history")
        algo.dpp_ground_set = AlgorithmConfig::GroundSet::FullHistory;
    else
        field_error(prefix + ".dpp_ground_set", "expected 'window' or 'full_history'");

    if (algo.rkhs_bound < 0.0)
        field_error(prefix + ".B", "must be >= 0");
    if (!(algo.delta > 0.0 && algo.delta < 1.0))
        field_error(prefix + ".delta", "must lie in (0, 1)");
    if (!(algo.alpha_tilde > 0.0))
        field_error(prefix + ".alpha_tilde", "must be > 0");
    if (algo.eta < 0.0)
        field_error(prefix + ".eta", "must be >= 0");
    if (!(algo.reward_hi > algo.reward_lo))
        field_error(prefix + ".reward_hi", "must exceed reward_lo");
    return algo;
}

json algorithm_to_json(const AlgorithmConfig& algo) {
    json j;
    j["kind"] = to_string(algo.kind);
    j["name"] = algo.label();
    j["kernel"] = kernel_to_json(algo.kernel);
    j["B"] = algo.rkhs_bound;
    j["delta"] = algo.delta;
    j["alpha_tilde"] = algo.alpha_tilde;
    j["query_budget_scale"] = algo.query_budget_scale;
    j["beta_denominator"] =
        algo.beta_denominator == BetaDenominator::Sigma ? "sigma" : "K";
    j["dpp_ground_set"] =
        algo.dpp_ground_set == AlgorithmConfig::GroundSet::Window ? "window"
                                                                  : "full_history";
    j["eta"] = algo.eta;
    j["reward_lo"] = algo.reward_lo;
    j["reward_hi"] = algo.reward_hi;
    return j;
}

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                   ? c
                   : '_';
    return out;
}

} // namespace

DecisionGrid ExperimentConfig::make_grid() const {
    const Eigen::VectorXd lo =
        Eigen::VectorXd::Constant(environment.input_dim, grid_low);
    const Eigen::VectorXd hi =
        Eigen::VectorXd::Constant(environment.input_dim, grid_high);
    return DecisionGrid::uniform(lo, hi, grid_resolution);
}

void ExperimentConfig::validate() const {
    environment.validate();
    if (horizon < 1)
        field_error("T", "must be >= 1");
    if (seeds.empty())
        field_error("seeds", "must be non-empty");
    for (size_t i = 0; i < seeds.size(); ++i)
        for (size_t k = i + 1; k < seeds.size(); ++k)
            if (seeds[i] == seeds[k])
                field_error("seeds", "duplicate seed " + std::to_string(seeds[i]));
    if (grid_resolution < 2)
        field_error("grid.resolution", "must be >= 2");
    if (inner_resolution < 2)
        field_error("grid.inner_resolution", "must be >= 2");
    if (!(grid_low < grid_high))
        field_error("grid.low", "must be < grid.high");
    if (algorithms.empty())
        field_error("algorithms", "must be non-empty");
    for (size_t i = 0; i < algorithms.size(); ++i) {
        const auto& algo = algorithms[i];
        const bool windowed = algo.kind == AlgorithmKind::WSparqBl ||
                              algo.kind == AlgorithmKind::WSparqSeqGame;
        if (windowed) {
            if (!(environment.alpha > 0.0))
                field_error("environment.alpha",
                            "windowed algorithms need alpha > 0");
            // surfaces Matern 2nu <= d at config time
            query_budget(1, algo.kernel, environment.input_dim,
                         algo.query_budget_scale);
        }
        if (algo.kind == AlgorithmKind::WSparqSeqGame &&
            environment.kind != EnvironmentKind::OpponentDrift)
            field_error("algorithms[" + std::to_string(i) + "].kind",
                        "wsparq_seqgame requires an opponent_drift environment");
    }
    for (size_t i = 0; i < algorithms.size(); ++i)
        for (size_t k = i + 1; k < algorithms.size(); ++k)
            if (algorithms[i].label() == algorithms[k].label())
                field_error("algorithms", "duplicate label '" + algorithms[i].label() + "'");
}

std::vector<std::string> ExperimentConfig::admissibility_warnings() const {
    std::vector<std::string> warnings;
    for (const auto& algo : algorithms) {
        if (algo.kind != AlgorithmKind::WSparqBl &&
            algo.kind != AlgorithmKind::WSparqSeqGame)
            continue;
        const double threshold =
            admissible_alpha_tilde(algo.kernel, environment.input_dim);
        if (threshold <= 0.0)
            warnings.push_back("algorithm '" + algo.label() +
                               "': no admissible alpha_tilde for this kernel and "
                               "input dimension (threshold " +
                               fmt_double(threshold) + ")");
        else if (algo.alpha_tilde >= threshold)
            warnings.push_back("algorithm '" + algo.label() + "': alpha_tilde " +
                               fmt_double(algo.alpha_tilde) +
                               " is not below the admissible threshold " +
                               fmt_double(threshold));
    }
    return warnings;
}

ExperimentConfig parse_experiment_config(const json& j) {
    ExperimentConfig config;
    if (!j.contains("environment"))
        field_error("environment", "missing");
    config.environment = parse_environment(j.at("environment"));
    config.horizon = require<long>(j, "T");
    config.seeds = require<std::vector<std::uint64_t>>(j, "seeds");
    config.output_dir = optional_field<std::string>(j, "output_dir", "out");
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        config.grid_low = optional_field<double>(g, "low", 0.0);
        config.grid_high = optional_field<double>(g, "high", 1.0);
        config.grid_resolution = optional_field<int>(g, "resolution", 256);
        config.inner_resolution = optional_field<int>(g, "inner_resolution", 64);
    }
    if (!j.contains("algorithms") || !j.at("algorithms").is_array())
        field_error("algorithms", "missing or not an array");
    size_t index = 0;
    for (const auto& a : j.at("algorithms"))
        config.algorithms.push_back(parse_algorithm(a, index++));
    config.validate();
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path_or_preset) {
    json j;
    if (fs::exists(path_or_preset)) {
        std::ifstream in(path_or_preset);
        if (!in)
            throw ConfigError("cannot read config file '" + path_or_preset + "'");
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError("config '" + path_or_preset + "': " + e.what());
        }
    } else {
        std::string name = path_or_preset;
        if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
            name = name.substr(0, name.size() - 5);
        j = json::parse(presets::json_text(name));
    }
    return parse_experiment_config(j);
}

json experiment_config_to_json(const ExperimentConfig& config) {
    json j;
    j["T"] = config.horizon;
    j["seeds"] = config.seeds;
    j["output_dir"] = config.output_dir;
    j["environment"] = environment_to_json(config.environment);
    j["grid"] = {{"low", config.grid_low},
                 {"high", config.grid_high},
                 {"resolution", config.grid_resolution},
                 {"inner_resolution", config.inner_resolution}};
    j["algorithms"] = json::array();
    for (const auto& algo : config.algorithms)
        j["algorithms"].push_back(algorithm_to_json(algo));
    return j;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    const std::string dump = experiment_config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : dump) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

AggregateResult aggregate(const std::vector<RegretTrace>& traces) {
    if (traces.empty())
        throw std::invalid_argument("aggregate: no traces");
    AggregateResult result;
    result.horizon = traces.front().horizon();
    result.n_traces = static_cast<long>(traces.size());
    for (const auto& trace : traces) {
        if (trace.horizon() != result.horizon)
            throw std::invalid_argument("aggregate: traces have mismatched horizons");
        result.final_queries.push_back(trace.additional_queries.back());
    }
    const double n = static_cast<double>(traces.size());
    for (long i = 0; i < result.horizon; ++i) {
        double mean = 0.0;
        for (const auto& trace : traces)
            mean += trace.cumulative_regret[static_cast<size_t>(i)];
        mean /= n;
        double ss = 0.0;
        for (const auto& trace : traces) {
            const double d = trace.cumulative_regret[static_cast<size_t>(i)] - mean;
            ss += d * d;
        }
        result.mean_cumulative_regret.push_back(mean);
        result.std_cumulative_regret.push_back(n > 1.0 ? std::sqrt(ss / (n - 1.0))
                                                       : 0.0);
    }
    return result;
}

void write_trace_csv(std::ostream& out, const RegretTrace& trace) {
    out << "t,window_id";
    for (int i = 0; i < trace.input_dim; ++i)
        out << ",x_" << i;
    for (int i = 0; i < trace.output_dim; ++i)
        out << ",y_" << i;
    out << ",r_t,R_t,N_t,beta_t\n";
    for (size_t row = 0; row < trace.t.size(); ++row) {
        out << trace.t[row] << ',' << trace.window_id[row];
        for (int i = 0; i < trace.input_dim; ++i)
            out << ',' << fmt_double(trace.x[row](i));
        for (int i = 0; i < trace.output_dim; ++i)
            out << ',' << fmt_double(trace.y[row](i));
        out << ',' << fmt_double(trace.instant_regret[row]) << ','
            << fmt_double(trace.cumulative_regret[row]) << ','
            << trace.additional_queries[row] << ',' << fmt_double(trace.beta[row])
            << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    return cells;
}

} // namespace

RegretTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("trace CSV: empty file");
    const auto header = split_csv_line(line);
    int d = 0, m = 0;
    for (const auto& h : header) {
        if (h.rfind("x_", 0) == 0)
            ++d;
        if (h.rfind("y_", 0) == 0)
            ++m;
    }
    if (header.size() != static_cast<size_t>(6 + d + m) || header[0] != "t" ||
        header[1] != "window_id" || header.back() != "beta_t")
        throw ConfigError("trace CSV: unexpected header");
    RegretTrace trace;
    trace.input_dim = d;
    trace.output_dim = m;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ConfigError("trace CSV: malformed row");
        size_t c = 0;
        trace.t.push_back(std::stol(cells[c++]));
        trace.window_id.push_back(std::stol(cells[c++]));
        Eigen::VectorXd x(d), y(m);
        for (int i = 0; i < d; ++i)
            x(i) = std::stod(cells[c++]);
        for (int i = 0; i < m; ++i)
            y(i) = std::stod(cells[c++]);
        trace.x.push_back(std::move(x));
        trace.y.push_back(std::move(y));
        trace.instant_regret.push_back(std::stod(cells[c++]));
        trace.cumulative_regret.push_back(std::stod(cells[c++]));
        trace.additional_queries.push_back(std::stol(cells[c++]));
        trace.beta.push_back(std::stod(cells[c++]));
    }
    return trace;
}

void write_aggregate_csv(std::ostream& out, const AggregateResult& result) {
    out << "t,mean_R,std_R\n";
    for (long i = 0; i < result.horizon; ++i)
        out << (i + 1) << ',' << fmt_double(result.mean_cumulative_regret[static_cast<size_t>(i)])
            << ',' << fmt_double(result.std_cumulative_regret[static_cast<size_t>(i)]) << '\n';
}

AggregateResult read_aggregate_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,mean_R,std_R")
        throw ConfigError("aggregate CSV: unexpected header");
    AggregateResult result;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw ConfigError("aggregate CSV: malformed row");
        result.mean_cumulative_regret.push_back(std::stod(cells[1]));
        result.std_cumulative_regret.push_back(std::stod(cells[2]));
        ++result.horizon;
    }
    return result;
}

void emit_plot_data(const AggregateResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    write_aggregate_csv(out, result);
    if (!out.good())
        throw ConfigError("write failed for '" + path + "'");
}

std::string trace_filename(const std::string& algo_label, std::uint64_t seed) {
    return "trace_" + sanitize_label(algo_label) + "_" + std::to_string(seed) + ".csv";
}

std::string aggregate_filename(const std::string& algo_label) {
    return "aggregate_" + sanitize_label(algo_label) + ".csv";
}

ExperimentOutput run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    const DecisionGrid grid = config.make_grid();

    struct Run {
        size_t algo_index;
        size_t seed_index;
        RegretTrace trace;
    };
    std::vector<Run> runs;
    for (size_t a = 0; a < config.algorithms.size(); ++a)
        for (size_t s = 0; s < config.seeds.size(); ++s)
            runs.push_back({a, s, {}});

    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= runs.size())
                return;
            if (failure)
                return;
            try {
                Run& run = runs[i];
                const auto& algo = config.algorithms[run.algo_index];
                const std::uint64_t seed =
                    derive_run_seed(config.seeds[run.seed_index], algo.label(),
                                    run.seed_index);
                run.trace = run_episode(algo, config.environment, grid,
                                        config.horizon, seed);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
        }
    };
    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    // All runs succeeded; persist everything in one pass.
    fs::create_directories(config.output_dir);
    ExperimentOutput output;
    json manifest;
    manifest["config_hash"] = "0x" + [&] {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(config_hash(config)));
        return std::string(buf);
    }();
    manifest["T"] = config.horizon;
    manifest["seeds"] = config.seeds;
    manifest["warnings"] = config.admissibility_warnings();
    manifest["grid_max_gap"] = grid.max_gap();

    for (size_t a = 0; a < config.algorithms.size(); ++a) {
        const auto& algo = config.algorithms[a];
        // ascending-seed order for aggregation and files
        std::vector<size_t> order(config.seeds.size());
        for (size_t s = 0; s < order.size(); ++s)
            order[s] = s;
        std::sort(order.begin(), order.end(), [&](size_t l, size_t r) {
            return config.seeds[l] < config.seeds[r];
        });

        std::vector<RegretTrace> traces;
        for (size_t s : order)
            for (const auto& run : runs)
                if (run.algo_index == a && run.seed_index == s)
                    traces.push_back(run.trace);

        for (size_t k = 0; k < order.size(); ++k) {
            const std::string name =
                trace_filename(algo.label(), config.seeds[order[k]]);
            const std::string path = (fs::path(config.output_dir) / name).string();
            std::ofstream out(path);
            if (!out)
                throw ConfigError("cannot write '" + path + "'");
            write_trace_csv(out, traces[k]);
            output.trace_files.push_back(path);
        }
        const AggregateResult agg = aggregate(traces);
        const std::string agg_path =
            (fs::path(config.output_dir) / aggregate_filename(algo.label())).string();
        emit_plot_data(agg, agg_path);
        output.aggregate_files.push_back(agg_path);
        output.aggregates.emplace_back(algo.label(), agg);
    }

    json files = json::array();
    for (const auto& f : output.trace_files)
        files.push_back(fs::path(f).filename().string());
    for (const auto& f : output.aggregate_files)
        files.push_back(fs::path(f).filename().string());
    manifest["files"] = files;
    manifest["algorithms"] = json::array();
    for (const auto& algo : config.algorithms)
        manifest["algorithms"].push_back(algo.label());
    json query_counts;
    for (const auto& [label, agg] : output.aggregates)
        query_counts[label] = agg.final_queries; // N_T per seed, ascending order
    manifest["final_query_counts"] = query_counts;

    const std::string manifest_path =
        (fs::path(config.output_dir) / "manifest.json").string();
    std::ofstream out(manifest_path);
    if (!out)
        throw ConfigError("cannot write '" + manifest_path + "'");
    out << manifest.dump(2) << '\n';
    output.manifest_file = manifest_path;
    return output;
}

std::vector<std::pair<std::string, AggregateResult>>
aggregate_directory(const std::string& dir) {
    const std::regex pattern("trace_(.+)_([0-9]+)\\.csv");
    std::map<std::string, std::map<std::uint64_t, std::string>> grouped;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::smatch match;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, match, pattern))
            grouped[match[1]][std::stoull(match[2])] = entry.path().string();
    }
    if (grouped.empty())
        throw ConfigError("no trace files found in '" + dir + "'");
    std::vector<std::pair<std::string, AggregateResult>> results;
    for (const auto& [label, by_seed] : grouped) {
        std::vector<RegretTrace> traces;
        for (const auto& [seed, path] : by_seed) {
            std::ifstream in(path);
            if (!in)
                throw ConfigError("cannot read '" + path + "'");
            traces.push_back(read_trace_csv(in));
        }
        AggregateResult agg = aggregate(traces);
        emit_plot_data(agg, (fs::path(dir) / aggregate_filename(label)).string());
        results.emplace_back(label, std::move(agg));
    }
    return results;
}

} // namespace tvbo
