#include "tvbo/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_csv(const std::string& input) {
    std::vector<std::string> out;
    std::stringstream ss(input);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::string& algos, const std::string& seeds, int threads) {
    tvbo::ExperimentConfig config = tvbo::load_experiment_config(config_path);
    if (!out_dir.empty())
        config.output_dir = out_dir;
    if (!algos.empty()) {
        const auto wanted = split_csv(algos);
        std::vector<tvbo::AlgorithmConfig> kept;
        for (const auto& name : wanted) {
            bool found = false;
            for (const auto& algo : config.algorithms)
                if (algo.label() == name) {
                    kept.push_back(algo);
                    found = true;
                }
            if (!found)
                throw tvbo::ConfigError("--algos: '" + name + "' is not in the config");
        }
        config.algorithms = std::move(kept);
    }
    if (!seeds.empty()) {
        config.seeds.clear();
        for (const auto& s : split_csv(seeds))
            config.seeds.push_back(std::stoull(s));
    }
    config.validate();
    for (const auto& warning : config.admissibility_warnings())
        std::cerr << "warning: " << warning << '\n';

    const auto output = tvbo::run_experiment(config, threads);
    std::cout << "wrote " << output.trace_files.size() << " trace files, "
              << output.aggregate_files.size() << " aggregates and "
              << output.manifest_file << '\n';
    for (const auto& [label, agg] : output.aggregates)
        std::cout << "  " << label << ": mean R_T = "
                  << agg.mean_cumulative_regret.back()
                  << " (std " << agg.std_cumulative_regret.back() << ")\n";
    return 0;
}

int aggregate_command(const std::string& dir) {
    const auto results = tvbo::aggregate_directory(dir);
    for (const auto& [label, agg] : results)
        std::cout << label << ": " << agg.n_traces << " traces, mean R_T = "
                  << agg.mean_cumulative_regret.back() << " (std "
                  << agg.std_cumulative_regret.back() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying Bayesian optimization simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, algos, seeds, in_dir, preset_name;
    int threads = 1;

    auto* run = app.add_subcommand("run", "Run an experiment from a config file or preset");
    run->add_option("--config", config_path, "Config file path or preset name")->required();
    run->add_option("--out", out_dir, "Override the output directory");
    run->add_option("--algos", algos, "Comma-separated algorithm labels to run");
    run->add_option("--seeds", seeds, "Comma-separated seed overrides");
    run->add_option("--threads", threads, "Worker threads for independent runs");

    auto* agg = app.add_subcommand("aggregate", "Re-aggregate persisted traces");
    agg->add_option("--in", in_dir, "Directory containing trace CSV files")->required();

    auto* presets = app.add_subcommand("presets", "Preset management");
    auto* presets_list = presets->add_subcommand("list", "List built-in presets");
    auto* presets_show = presets->add_subcommand("show", "Print a preset config");
    presets_show->add_option("name", preset_name, "Preset name")->required();
    presets->require_subcommand(1);

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return run_command(config_path, out_dir, algos, seeds, threads);
        if (agg->parsed())
            return aggregate_command(in_dir);
        if (presets_list->parsed()) {
            for (const auto& name : tvbo::presets::names())
                std::cout << name << '\n';
            return 0;
        }
        if (presets_show->parsed()) {
            std::cout << tvbo::presets::json_text(preset_name);
            return 0;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tvbo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const tvbo::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
