#pragma once

#include "tvbo/algorithms.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace tvbo {

struct ExperimentConfig {
    EnvironmentSpec environment;
    long horizon = 300;
    std::vector<std::uint64_t> seeds;
    double grid_low = 0.0;
    double grid_high = 1.0;
    int grid_resolution = 256;
    int inner_resolution = 64;
    std::vector<AlgorithmConfig> algorithms;
    std::string output_dir = "out";

    DecisionGrid make_grid() const;
    void validate() const; // throws ConfigError with field-level messages
    // Table-derived alpha_tilde guardrails; non-fatal.
    std::vector<std::string> admissibility_warnings() const;
};

// Field-checked parse of the JSON-shaped config; error messages name the
// offending field.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path_or_preset);

// Canonical re-serialization (defaults filled in, keys sorted); two configs
// hash equal iff every effective field matches.
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

struct AggregateResult {
    long horizon = 0;
    long n_traces = 0;
    std::vector<double> mean_cumulative_regret;
    std::vector<double> std_cumulative_regret; // (n-1) denominator; 0 for n == 1
    std::vector<long> final_queries;           // N_T per trace, aggregation order
};

// Per-t sample mean/std of cumulative regret across traces sharing a horizon.
AggregateResult aggregate(const std::vector<RegretTrace>& traces);

// Trace CSV: t,window_id,x_0..x_{d-1},y_0..y_{m-1},r_t,R_t,N_t,beta_t.
// Doubles are printed with %.17g so reruns and parse-backs are exact.
void write_trace_csv(std::ostream& out, const RegretTrace& trace);
RegretTrace read_trace_csv(std::istream& in);

// Aggregate CSV (the plot data): t,mean_R,std_R, one row per step.
void emit_plot_data(const AggregateResult& result, const std::string& path);
void write_aggregate_csv(std::ostream& out, const AggregateResult& result);
AggregateResult read_aggregate_csv(std::istream& in);

std::string trace_filename(const std::string& algo_label, std::uint64_t seed);
std::string aggregate_filename(const std::string& algo_label);

struct ExperimentOutput {
    std::vector<std::string> trace_files;
    std::vector<std::string> aggregate_files;
    std::string manifest_file;
    // label -> (traces in ascending-seed order, aggregate)
    std::vector<std::pair<std::string, AggregateResult>> aggregates;
};

// Runs every (algorithm, seed) pair, then persists raw traces, per-algorithm
// aggregates, and a manifest in one pass. Nothing is written if any run
// fails.
ExperimentOutput run_experiment(const ExperimentConfig& config, int threads = 1);

// Re-aggregates persisted traces found in a directory (grouped by algorithm
// label, ascending seed order) and rewrites the aggregate files.
std::vector<std::pair<std::string, AggregateResult>>
aggregate_directory(const std::string& dir);

namespace presets {
std::vector<std::string> names();
const std::string& json_text(const std::string& name); // throws ConfigError
} // namespace presets

} // namespace tvbo
