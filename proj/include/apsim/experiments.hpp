#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apsim/engine.hpp"

namespace apsim {

// Optional sweep axes; an empty list leaves that dimension at its base value.
struct SweepAxes {
    std::vector<double> epsilon;
    std::vector<int> sticky_limit;
    std::vector<int> ap_count;      // uniform AP placement only
    std::vector<double> demand_bps;
};

struct ExperimentConfig {
    ScenarioSpec scenario;
    PolicySpec policy;
    int periods = 500;
    int repetitions = 100;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    bool final_metric_last_period_only = false;  // default: mean over the last 10% of periods
    SweepAxes sweep;
    int sensed_min_samples = 100;
    bool emit_sensed_analysis = false;
    bool trace_first_rep = false;  // JSON-lines period trace of repetition 0 per point
    int threads = 0;               // 0 = hardware concurrency

    void validate() const;
};

// One resolved (scenario, policy) combination of a sweep.
struct SweepPoint {
    std::string id;
    ScenarioSpec scenario;
    PolicySpec policy;
};

struct Experiment {
    ExperimentConfig base;
    std::vector<SweepPoint> points;
};

struct SensedSample {
    int aps_sensed = 0;
    double satisfaction = 0.0;
};

struct SensedBin {
    int aps_sensed = 0;
    double mean_satisfaction = 0.0;
    int samples = 0;
};

// Aggregates across repetitions for one sweep point. Per-period vectors are
// indexed t-1 for association periods t = 1..periods.
struct AggregateSeries {
    std::string point_id;
    std::vector<double> mean_satisfaction;  // satisfaction-per-iteration over reps and STAs
    std::vector<double> std_satisfaction;   // across repetitions of the per-rep STA mean
    std::vector<double> satisfied_count;    // per-period count, mean over reps
    std::vector<double> mean_throughput_bps;
    double final_satisfied_mean = 0.0;  // per-period satisfied count over the final window
    double final_satisfied_std = 0.0;
    double final_throughput_mean_bps = 0.0;
    double final_satisfaction_mean = 0.0;  // satisfaction-per-iteration at the last period
    std::vector<SensedBin> sensed;         // bins below sensed_min_samples dropped
    std::vector<std::uint64_t> rep_seeds;
};

// Fraction of periods 1..t in which the station was satisfied.
double satisfaction_per_iteration(std::span<const std::uint8_t> satisfied_flags, int t);

// Mean satisfaction grouped by how many APs a station senses; bins with
// fewer than min_samples entries are dropped. Sorted by aps_sensed.
std::vector<SensedBin> aps_sensed_analysis(std::span<const SensedSample> samples, int min_samples);

// Cross product of the configured sweep axes over the base scenario/policy.
std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config);

Experiment experiment_from_config(const ExperimentConfig& config);

// Runs every repetition of one point (repetition k's seed is derived from
// the master seed, the point id and k) and aggregates.
AggregateSeries run_sweep_point(const ExperimentConfig& base, const SweepPoint& point);

// Runs all points, writes one CSV per point plus a JSON manifest into
// base.output_dir, and returns the aggregates.
std::vector<AggregateSeries> run_experiment(const Experiment& experiment);

// Label used in point ids and output filenames.
std::string policy_label(const PolicySpec& policy);

struct PresetInfo {
    std::string name;
    std::string description;
};

const std::vector<PresetInfo>& preset_registry();
bool is_preset(const std::string& name);
Experiment make_preset(const std::string& name);

}  // namespace apsim
