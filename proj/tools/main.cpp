#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "apsim/config.hpp"

namespace {

void print_point_summaries(const std::vector<apsim::AggregateSeries>& results, int n_stas,
                           const std::string& output_dir) {
    for (const apsim::AggregateSeries& agg : results)
        std::printf("%-28s satisfied %6.2f/%d  throughput %8.3f Mbps  satisfaction %.4f\n",
                    agg.point_id.c_str(), agg.final_satisfied_mean, n_stas,
                    agg.final_throughput_mean_bps / 1e6, agg.final_satisfaction_mean);
    std::printf("wrote %zu point file(s) + manifest.json to %s\n", results.size(),
                output_dir.c_str());
}

int run_and_report(const apsim::Experiment& experiment) {
    const auto results = apsim::run_experiment(experiment);
    int n_stas = experiment.points.empty() ? 0 : experiment.points.front().scenario.stas.count;
    print_point_summaries(results, n_stas, experiment.base.output_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator of bandit-driven AP selection in dense WLANs"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
    std::string config_path;
    run_cmd->add_option("config", config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);

    auto* preset_cmd = app.add_subcommand("preset", "run a named preset experiment");
    std::string preset_name;
    std::optional<std::uint64_t> opt_seed;
    std::optional<int> opt_periods, opt_reps, opt_threads;
    std::optional<std::string> opt_out;
    bool opt_trace = false;
    preset_cmd->add_option("name", preset_name, "preset name (see list-presets)")->required();
    preset_cmd->add_option("--seed", opt_seed, "master seed");
    preset_cmd->add_option("--periods", opt_periods, "association periods per repetition");
    preset_cmd->add_option("--reps", opt_reps, "independent repetitions per point");
    preset_cmd->add_option("--out", opt_out, "output directory");
    preset_cmd->add_option("--threads", opt_threads, "worker threads (0 = all cores)");
    preset_cmd->add_flag("--trace", opt_trace, "write a period trace of repetition 0 per point");

    auto* list_cmd = app.add_subcommand("list-presets", "list available presets");

    auto* export_cmd = app.add_subcommand(
        "export-scenario", "build and dump the deployment repetition 0 of the first point uses");
    std::string export_config;
    std::string export_preset;
    std::optional<std::uint64_t> export_seed;
    std::string export_out;
    export_cmd->add_option("config", export_config, "experiment config file")
        ->check(CLI::ExistingFile);
    export_cmd->add_option("--preset", export_preset, "preset name instead of a config file");
    export_cmd->add_option("--seed", export_seed, "master seed override");
    export_cmd->add_option("--out", export_out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const apsim::ExperimentConfig config = apsim::load_experiment_config(config_path);
            return run_and_report(apsim::experiment_from_config(config));
        }
        if (*preset_cmd) {
            apsim::Experiment experiment = apsim::make_preset(preset_name);
            if (opt_seed) experiment.base.master_seed = *opt_seed;
            if (opt_periods) experiment.base.periods = *opt_periods;
            if (opt_reps) experiment.base.repetitions = *opt_reps;
            if (opt_out) experiment.base.output_dir = *opt_out;
            if (opt_threads) experiment.base.threads = *opt_threads;
            experiment.base.trace_first_rep = opt_trace;
            experiment.base.validate();
            return run_and_report(experiment);
        }
        if (*list_cmd) {
            for (const apsim::PresetInfo& p : apsim::preset_registry())
                std::printf("%-24s %s\n", p.name.c_str(), p.description.c_str());
            return 0;
        }
        if (*export_cmd) {
            if (export_config.empty() == export_preset.empty()) {
                std::cerr << "export-scenario: give either a config file or --preset\n";
                return 1;
            }
            apsim::Experiment experiment =
                export_preset.empty()
                    ? apsim::experiment_from_config(apsim::load_experiment_config(export_config))
                    : apsim::make_preset(export_preset);
            if (export_seed) experiment.base.master_seed = *export_seed;
            if (experiment.points.empty()) {
                std::cerr << "export-scenario: experiment has no sweep points\n";
                return 1;
            }
            const apsim::SweepPoint& point = experiment.points.front();
            const std::uint64_t rep_seed = apsim::derive_seed(
                experiment.base.master_seed, apsim::hash_str(point.id), 0);
            const apsim::Scenario scenario = apsim::build_scenario(
                point.scenario, apsim::derive_seed(rep_seed, apsim::streams::scenario));
            const std::string dump = apsim::scenario_to_json(scenario).dump(2);
            if (export_out.empty()) {
                std::cout << dump << '\n';
            } else {
                std::ofstream out(export_out, std::ios::binary);
                if (!out) {
                    std::cerr << "cannot write " << export_out << '\n';
                    return 1;
                }
                out << dump << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
