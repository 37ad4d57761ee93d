#include "apsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "apsim/config.hpp"

namespace apsim {

namespace {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double mean_of(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Reduced per-repetition series; full period records are dropped once summed.
struct RepSummary {
    std::vector<double> sat_count;     // periods 1..P
    std::vector<double> sat_per_iter;  // mean over STAs of per-STA satisfaction-per-iteration
    std::vector<double> thr_mean_bps;  // mean served throughput per STA
    double final_satisfied = 0.0;
    double final_thr_bps = 0.0;
    double final_sat_per_iter = 0.0;
    std::vector<SensedSample> sensed;  // one sample per STA
};

RepSummary summarize_run(const Scenario& scn, const std::vector<PeriodRecord>& records,
                         bool last_period_only) {
    const int periods = static_cast<int>(records.size()) - 1;
    const int n = scn.n_stas();
    RepSummary s;
    s.sat_count.resize(periods);
    s.sat_per_iter.resize(periods);
    s.thr_mean_bps.resize(periods);
    std::vector<int> sta_sat_count(n, 0);
    double cumulative = 0.0;
    for (int t = 1; t <= periods; ++t) {
        const PeriodRecord& rec = records[t];
        s.sat_count[t - 1] = rec.satisfied_count;
        cumulative += rec.satisfied_count;
        // mean over STAs of (satisfied periods so far / t) telescopes into
        // a prefix sum of the per-period counts
        s.sat_per_iter[t - 1] = cumulative / (static_cast<double>(n) * t);
        double thr = 0.0;
        for (int i = 0; i < n; ++i) {
            thr += rec.served_throughput_bps[i];
            sta_sat_count[i] += rec.satisfied[i];
        }
        s.thr_mean_bps[t - 1] = thr / n;
    }
    const int window = last_period_only ? 1 : std::max(1, periods / 10);
    double sat_sum = 0.0, thr_sum = 0.0;
    for (int t = periods - window + 1; t <= periods; ++t) {
        sat_sum += s.sat_count[t - 1];
        thr_sum += s.thr_mean_bps[t - 1];
    }
    s.final_satisfied = sat_sum / window;
    s.final_thr_bps = thr_sum / window;
    s.final_sat_per_iter = s.sat_per_iter[periods - 1];
    s.sensed.resize(n);
    for (int i = 0; i < n; ++i)
        s.sensed[i] = {static_cast<int>(scn.detected_aps[i].size()),
                       static_cast<double>(sta_sat_count[i]) / periods};
    return s;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::logic_error(std::string("non-finite value in ") + what);
}

void write_point_csv(const std::filesystem::path& path, const AggregateSeries& agg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "period,mean_satisfaction,std_satisfaction,satisfied_count,mean_throughput_bps\n";
    for (std::size_t t = 0; t < agg.mean_satisfaction.size(); ++t) {
        require_finite(agg.mean_satisfaction[t], "mean_satisfaction");
        require_finite(agg.std_satisfaction[t], "std_satisfaction");
        require_finite(agg.satisfied_count[t], "satisfied_count");
        require_finite(agg.mean_throughput_bps[t], "mean_throughput_bps");
        out << (t + 1) << ',' << format_double(agg.mean_satisfaction[t]) << ','
            << format_double(agg.std_satisfaction[t]) << ','
            << format_double(agg.satisfied_count[t]) << ','
            << format_double(agg.mean_throughput_bps[t]) << '\n';
    }
}

void write_sensed_csv(const std::filesystem::path& path, const AggregateSeries& agg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "aps_sensed,mean_satisfaction,samples\n";
    for (const SensedBin& bin : agg.sensed) {
        require_finite(bin.mean_satisfaction, "sensed mean_satisfaction");
        out << bin.aps_sensed << ',' << format_double(bin.mean_satisfaction) << ',' << bin.samples
            << '\n';
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    if (periods < 1) throw std::invalid_argument("experiment: periods must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
    if (sensed_min_samples < 1)
        throw std::invalid_argument("experiment: sensed_min_samples must be >= 1");
    if (threads < 0) throw std::invalid_argument("experiment: threads must be >= 0");
    if (policy.epsilon.kind == EpsilonSchedule::Kind::constant &&
        (policy.epsilon.value < 0.0 || policy.epsilon.value > 1.0))
        throw std::invalid_argument("experiment: static epsilon must lie in [0, 1]");
    if (policy.kind == PolicyKind::epsilon_sticky && policy.sticky_limit < 1)
        throw std::invalid_argument("experiment: sticky_limit must be >= 1");
    for (double e : sweep.epsilon) {
        if (e < 0.0 || e > 1.0) throw std::invalid_argument("sweep: epsilon values must lie in [0, 1]");
        if (policy.kind == PolicyKind::strongest_signal)
            throw std::invalid_argument("sweep: epsilon axis needs a bandit policy");
    }
    for (int sc : sweep.sticky_limit) {
        if (sc < 1) throw std::invalid_argument("sweep: sticky_limit values must be >= 1");
        if (policy.kind != PolicyKind::epsilon_sticky)
            throw std::invalid_argument("sweep: sticky_limit axis needs the sticky policy");
    }
    for (int m : sweep.ap_count) {
        if (m < 1) throw std::invalid_argument("sweep: ap_count values must be >= 1");
        if (scenario.aps.kind != ApPlacementSpec::Kind::uniform)
            throw std::invalid_argument("sweep: ap_count axis needs uniform AP placement");
    }
    for (double w : sweep.demand_bps)
        if (w < 0.0) throw std::invalid_argument("sweep: demand values must be >= 0");
}

double satisfaction_per_iteration(std::span<const std::uint8_t> satisfied_flags, int t) {
    if (t < 1 || t > static_cast<int>(satisfied_flags.size()))
        throw std::invalid_argument("satisfaction_per_iteration: t out of range");
    int count = 0;
    for (int i = 0; i < t; ++i) count += satisfied_flags[i];
    return static_cast<double>(count) / t;
}

std::vector<SensedBin> aps_sensed_analysis(std::span<const SensedSample> samples, int min_samples) {
    if (min_samples < 1) throw std::invalid_argument("aps_sensed_analysis: min_samples must be >= 1");
    std::map<int, std::pair<double, int>> acc;
    for (const SensedSample& s : samples) {
        auto& [sum, count] = acc[s.aps_sensed];
        sum += s.satisfaction;
        ++count;
    }
    std::vector<SensedBin> bins;
    for (const auto& [sensed, sc] : acc)
        if (sc.second >= min_samples) bins.push_back({sensed, sc.first / sc.second, sc.second});
    return bins;
}

std::string policy_label(const PolicySpec& policy) {
    switch (policy.kind) {
        case PolicyKind::strongest_signal: return "ss";
        case PolicyKind::epsilon_greedy:
        case PolicyKind::epsilon_sticky: {
            std::string label =
                policy.kind == PolicyKind::epsilon_greedy ? "greedy-eps" : "sticky-eps";
            switch (policy.epsilon.kind) {
                case EpsilonSchedule::Kind::constant: label += format_double(policy.epsilon.value); break;
                case EpsilonSchedule::Kind::inverse_sqrt: label += "invsqrt"; break;
                case EpsilonSchedule::Kind::inverse: label += "inv"; break;
            }
            if (policy.kind == PolicyKind::epsilon_sticky)
                label += "-sc" + std::to_string(policy.sticky_limit);
            return label;
        }
    }
    throw std::logic_error("policy_label: unknown policy kind");
}

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config) {
    const auto axis_d = [](const std::vector<double>& v) {
        return v.empty() ? std::vector<std::optional<double>>{std::nullopt}
                         : [&] {
                               std::vector<std::optional<double>> out;
                               for (double x : v) out.emplace_back(x);
                               return out;
                           }();
    };
    const auto axis_i = [](const std::vector<int>& v) {
        return v.empty() ? std::vector<std::optional<int>>{std::nullopt}
                         : [&] {
                               std::vector<std::optional<int>> out;
                               for (int x : v) out.emplace_back(x);
                               return out;
                           }();
    };
    std::vector<SweepPoint> points;
    for (const auto& ap : axis_i(config.sweep.ap_count)) {
        for (const auto& w : axis_d(config.sweep.demand_bps)) {
            for (const auto& eps : axis_d(config.sweep.epsilon)) {
                for (const auto& sc : axis_i(config.sweep.sticky_limit)) {
                    SweepPoint p;
                    p.scenario = config.scenario;
                    p.policy = config.policy;
                    if (ap) p.scenario.aps.count = *ap;
                    if (w) p.scenario.demand_bps = *w;
                    if (eps) p.policy.epsilon = {EpsilonSchedule::Kind::constant, *eps};
                    if (sc) p.policy.sticky_limit = *sc;
                    p.id = policy_label(p.policy);
                    if (ap) p.id += "-ap" + std::to_string(*ap);
                    if (w) p.id += "-w" + format_double(*w / 1e6);
                    points.push_back(std::move(p));
                }
            }
        }
    }
    return points;
}

Experiment experiment_from_config(const ExperimentConfig& config) {
    config.validate();
    return Experiment{config, expand_sweep(config)};
}

AggregateSeries run_sweep_point(const ExperimentConfig& base, const SweepPoint& point) {
    point.scenario.validate();
    const int reps = base.repetitions;
    const int periods = base.periods;
    const std::uint64_t point_hash = hash_str(point.id);

    AggregateSeries agg;
    agg.point_id = point.id;
    agg.rep_seeds.resize(reps);
    for (int k = 0; k < reps; ++k)
        agg.rep_seeds[k] = derive_seed(base.master_seed, point_hash, static_cast<std::uint64_t>(k));

    std::vector<RepSummary> summaries(reps);
    parallel_for(reps, base.threads, [&](int k) {
        const Scenario scn =
            build_scenario(point.scenario, derive_seed(agg.rep_seeds[k], streams::scenario));
        const SimulationResult sim = run_simulation(scn, point.policy, periods,
                                                    derive_seed(agg.rep_seeds[k], streams::engine));
        summaries[k] = summarize_run(scn, sim.records, base.final_metric_last_period_only);
    });

    agg.mean_satisfaction.resize(periods);
    agg.std_satisfaction.resize(periods);
    agg.satisfied_count.resize(periods);
    agg.mean_throughput_bps.resize(periods);
    std::vector<double> scratch(reps);
    for (int t = 0; t < periods; ++t) {
        for (int k = 0; k < reps; ++k) scratch[k] = summaries[k].sat_per_iter[t];
        agg.mean_satisfaction[t] = mean_of(scratch);
        agg.std_satisfaction[t] = sample_std(scratch, agg.mean_satisfaction[t]);
        double cnt = 0.0, thr = 0.0;
        for (int k = 0; k < reps; ++k) {
            cnt += summaries[k].sat_count[t];
            thr += summaries[k].thr_mean_bps[t];
        }
        agg.satisfied_count[t] = cnt / reps;
        agg.mean_throughput_bps[t] = thr / reps;
    }
    for (int k = 0; k < reps; ++k) scratch[k] = summaries[k].final_satisfied;
    agg.final_satisfied_mean = mean_of(scratch);
    agg.final_satisfied_std = sample_std(scratch, agg.final_satisfied_mean);
    for (int k = 0; k < reps; ++k) scratch[k] = summaries[k].final_thr_bps;
    agg.final_throughput_mean_bps = mean_of(scratch);
    for (int k = 0; k < reps; ++k) scratch[k] = summaries[k].final_sat_per_iter;
    agg.final_satisfaction_mean = mean_of(scratch);

    std::vector<SensedSample> all_samples;
    all_samples.reserve(static_cast<std::size_t>(reps) * summaries[0].sensed.size());
    for (const RepSummary& s : summaries)
        all_samples.insert(all_samples.end(), s.sensed.begin(), s.sensed.end());
    agg.sensed = aps_sensed_analysis(all_samples, base.sensed_min_samples);

    return agg;
}

std::vector<AggregateSeries> run_experiment(const Experiment& experiment) {
    const ExperimentConfig& base = experiment.base;
    base.validate();
    if (experiment.points.empty()) throw std::invalid_argument("experiment: no sweep points");

    const std::filesystem::path out_dir(base.output_dir);
    std::filesystem::create_directories(out_dir);

    nlohmann::json manifest;
    manifest["master_seed"] = base.master_seed;
    manifest["periods"] = base.periods;
    manifest["repetitions"] = base.repetitions;
    manifest["final_metric"] = base.final_metric_last_period_only ? "last_period" : "window";
    manifest["points"] = nlohmann::json::array();

    std::vector<AggregateSeries> all;
    all.reserve(experiment.points.size());
    for (const SweepPoint& point : experiment.points) {
        AggregateSeries agg = run_sweep_point(base, point);

        const std::string csv_name = point.id + ".csv";
        write_point_csv(out_dir / csv_name, agg);

        nlohmann::json entry;
        entry["id"] = point.id;
        entry["csv"] = csv_name;
        entry["policy"] = policy_spec_to_json(point.policy);
        entry["scenario"] = scenario_spec_to_json(point.scenario);
        entry["rep_seeds"] = agg.rep_seeds;
        entry["final"] = {{"satisfied_mean", agg.final_satisfied_mean},
                          {"satisfied_std", agg.final_satisfied_std},
                          {"throughput_bps_mean", agg.final_throughput_mean_bps},
                          {"satisfaction_mean", agg.final_satisfaction_mean}};

        if (base.emit_sensed_analysis) {
            const std::string sensed_name = point.id + "_sensed.csv";
            write_sensed_csv(out_dir / sensed_name, agg);
            entry["sensed_csv"] = sensed_name;
        }
        if (base.trace_first_rep) {
            // deterministic re-run of repetition 0 for the trace
            const Scenario scn =
                build_scenario(point.scenario, derive_seed(agg.rep_seeds[0], streams::scenario));
            const SimulationResult sim = run_simulation(
                scn, point.policy, base.periods, derive_seed(agg.rep_seeds[0], streams::engine));
            const std::string trace_name = point.id + "_rep0.jsonl";
            std::ofstream trace(out_dir / trace_name, std::ios::binary);
            if (!trace) throw std::runtime_error("cannot write trace for " + point.id);
            write_trace_jsonl(sim.records, trace);
            entry["trace"] = trace_name;
        }

        manifest["points"].push_back(std::move(entry));
        all.push_back(std::move(agg));
    }

    std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write manifest.json");
    mf << manifest.dump(2) << '\n';

    return all;
}

namespace {

ScenarioSpec toy_scenario(StaPlacementSpec::Kind sta_kind) {
    ScenarioSpec s;
    s.area = {80.0, 80.0};
    s.aps = {ApPlacementSpec::Kind::grid, 4, 4, 16};
    s.stas.kind = sta_kind;
    s.stas.count = 64;
    s.stas.per_cluster = 10;
    s.stas.cluster_side = 10.0;
    return s;
}

ScenarioSpec scaling_scenario(int ap_count) {
    ScenarioSpec s;
    s.area = {80.0, 80.0};
    s.aps.kind = ApPlacementSpec::Kind::uniform;
    s.aps.count = ap_count;
    s.stas.kind = StaPlacementSpec::Kind::clustered;
    s.stas.count = 100;
    s.stas.per_cluster = 10;
    s.stas.cluster_side = 10.0;
    return s;
}

PolicySpec ss_policy() {
    PolicySpec p;
    p.kind = PolicyKind::strongest_signal;
    return p;
}

PolicySpec greedy_policy(double eps) {
    PolicySpec p;
    p.kind = PolicyKind::epsilon_greedy;
    p.epsilon = {EpsilonSchedule::Kind::constant, eps};
    return p;
}

PolicySpec sticky_policy(double eps, int sticky_limit) {
    PolicySpec p;
    p.kind = PolicyKind::epsilon_sticky;
    p.epsilon = {EpsilonSchedule::Kind::constant, eps};
    p.sticky_limit = sticky_limit;
    return p;
}

PolicySpec sticky_decaying(EpsilonSchedule::Kind kind, int sticky_limit) {
    PolicySpec p;
    p.kind = PolicyKind::epsilon_sticky;
    p.epsilon.kind = kind;
    p.sticky_limit = sticky_limit;
    return p;
}

Experiment preset_base(const std::string& name, const ScenarioSpec& scenario) {
    Experiment e;
    e.base.scenario = scenario;
    e.base.policy = ss_policy();
    e.base.periods = 500;
    e.base.repetitions = 100;
    e.base.master_seed = 1;
    e.base.output_dir = "out/" + name;
    return e;
}

void add_point(Experiment& e, const ScenarioSpec& scenario, const PolicySpec& policy,
               const std::string& suffix = "") {
    e.points.push_back({policy_label(policy) + suffix, scenario, policy});
}

Experiment make_eps_sweep(const std::string& name, StaPlacementSpec::Kind kind) {
    Experiment e = preset_base(name, toy_scenario(kind));
    add_point(e, e.base.scenario, ss_policy());
    for (double eps : {0.02, 0.1, 0.5, 1.0}) add_point(e, e.base.scenario, greedy_policy(eps));
    for (double eps : {0.02, 0.1, 0.5, 1.0}) add_point(e, e.base.scenario, sticky_policy(eps, 1));
    return e;
}

Experiment make_sticky_sweep(const std::string& name, StaPlacementSpec::Kind kind) {
    Experiment e = preset_base(name, toy_scenario(kind));
    add_point(e, e.base.scenario, ss_policy());
    for (double eps : {0.02, 0.1, 0.5})
        for (int sc : {1, 2, 4, 8}) add_point(e, e.base.scenario, sticky_policy(eps, sc));
    return e;
}

Experiment make_decay_comparison() {
    Experiment e = preset_base("decay-comparison", toy_scenario(StaPlacementSpec::Kind::clustered));
    add_point(e, e.base.scenario, ss_policy());
    add_point(e, e.base.scenario, sticky_policy(0.02, 4));
    add_point(e, e.base.scenario, sticky_decaying(EpsilonSchedule::Kind::inverse_sqrt, 4));
    add_point(e, e.base.scenario, sticky_decaying(EpsilonSchedule::Kind::inverse, 4));
    return e;
}

Experiment make_ap_scaling() {
    Experiment e = preset_base("ap-scaling", scaling_scenario(16));
    for (int ap : {8, 16, 32, 64}) {
        const ScenarioSpec s = scaling_scenario(ap);
        const std::string suffix = "-ap" + std::to_string(ap);
        add_point(e, s, ss_policy(), suffix);
        add_point(e, s, greedy_policy(0.02), suffix);
        add_point(e, s, sticky_policy(0.02, 4), suffix);
    }
    return e;
}

Experiment make_sensed_analysis() {
    Experiment e = preset_base("sensed-analysis", scaling_scenario(32));
    e.base.emit_sensed_analysis = true;
    for (int ap : {32, 64, 128})
        add_point(e, scaling_scenario(ap), sticky_policy(0.02, 4), "-ap" + std::to_string(ap));
    return e;
}

Experiment make_demand_sweep() {
    Experiment e = preset_base("demand-sweep", scaling_scenario(16));
    for (double mbps : {2.0, 4.0, 6.0, 8.0}) {
        ScenarioSpec s = scaling_scenario(16);
        s.demand_bps = mbps * 1e6;
        const std::string suffix = "-w" + format_double(mbps);
        add_point(e, s, ss_policy(), suffix);
        add_point(e, s, greedy_policy(0.02), suffix);
        add_point(e, s, sticky_policy(0.02, 4), suffix);
    }
    return e;
}

}  // namespace

const std::vector<PresetInfo>& preset_registry() {
    static const std::vector<PresetInfo> registry = {
        {"eps-sweep-uniform", "epsilon sweep, toy grid, 64 uniformly placed STAs"},
        {"eps-sweep-clustered", "epsilon sweep, toy grid, 64 clustered STAs"},
        {"sticky-sweep-uniform", "sticky counter sweep (SC 1/2/4/8 x eps 0.02/0.1/0.5), uniform STAs"},
        {"sticky-sweep-clustered", "sticky counter sweep (SC 1/2/4/8 x eps 0.02/0.1/0.5), clustered STAs"},
        {"decay-comparison", "static eps 0.02 vs 1/sqrt(t) and 1/t schedules, sticky SC=4"},
        {"ap-scaling", "8/16/32/64 uniformly placed APs, 10 clusters of 10 STAs"},
        {"sensed-analysis", "satisfaction binned by APs sensed, 32/64/128 APs"},
        {"demand-sweep", "per-STA demand 2/4/6/8 Mbps, 16 APs, clustered STAs"},
    };
    return registry;
}

bool is_preset(const std::string& name) {
    for (const PresetInfo& p : preset_registry())
        if (p.name == name) return true;
    return false;
}

Experiment make_preset(const std::string& name) {
    if (name == "eps-sweep-uniform")
        return make_eps_sweep(name, StaPlacementSpec::Kind::uniform);
    if (name == "eps-sweep-clustered")
        return make_eps_sweep(name, StaPlacementSpec::Kind::clustered);
    if (name == "sticky-sweep-uniform")
        return make_sticky_sweep(name, StaPlacementSpec::Kind::uniform);
    if (name == "sticky-sweep-clustered")
        return make_sticky_sweep(name, StaPlacementSpec::Kind::clustered);
    if (name == "decay-comparison") return make_decay_comparison();
    if (name == "ap-scaling") return make_ap_scaling();
    if (name == "sensed-analysis") return make_sensed_analysis();
    if (name == "demand-sweep") return make_demand_sweep();
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace apsim
