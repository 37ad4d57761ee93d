#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "apsim/config.hpp"
#include "apsim/experiments.hpp"

using namespace apsim;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.scenario.area = {80.0, 80.0};
    c.scenario.aps = {ApPlacementSpec::Kind::grid, 2, 2, 4};
    c.scenario.stas.kind = StaPlacementSpec::Kind::clustered;
    c.scenario.stas.count = 12;
    c.scenario.stas.per_cluster = 4;
    c.scenario.stas.cluster_side = 10.0;
    c.scenario.n_channels = 3;
    c.policy.kind = PolicyKind::epsilon_sticky;
    c.policy.epsilon = {EpsilonSchedule::Kind::constant, 0.1};
    c.policy.sticky_limit = 2;
    c.periods = 12;
    c.repetitions = 3;
    c.master_seed = 5;
    c.threads = 1;
    c.sensed_min_samples = 1;
    return c;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool same_series(const AggregateSeries& a, const AggregateSeries& b) {
    return a.mean_satisfaction == b.mean_satisfaction &&
           a.std_satisfaction == b.std_satisfaction && a.satisfied_count == b.satisfied_count &&
           a.mean_throughput_bps == b.mean_throughput_bps &&
           a.final_satisfied_mean == b.final_satisfied_mean &&
           a.final_throughput_mean_bps == b.final_throughput_mean_bps;
}

}  // namespace

TEST_CASE("satisfaction per iteration is a prefix mean") {
    const std::vector<std::uint8_t> flags{1, 0, 1, 1};
    CHECK(satisfaction_per_iteration(flags, 1) == 1.0);
    CHECK(satisfaction_per_iteration(flags, 2) == 0.5);
    CHECK(satisfaction_per_iteration(flags, 3) == doctest::Approx(2.0 / 3));
    CHECK(satisfaction_per_iteration(flags, 4) == 0.75);
    CHECK_THROWS_AS(satisfaction_per_iteration(flags, 0), std::invalid_argument);
    CHECK_THROWS_AS(satisfaction_per_iteration(flags, 5), std::invalid_argument);

    const std::vector<std::uint8_t> all(100, 1);
    for (int t : {1, 50, 100}) CHECK(satisfaction_per_iteration(all, t) == 1.0);
    std::vector<std::uint8_t> half(100, 0);
    for (int t = 0; t < 50; ++t) half[t] = 1;
    CHECK(satisfaction_per_iteration(half, 100) == 0.5);
}

TEST_CASE("sensed bins group, average and filter") {
    const std::vector<SensedSample> samples{{3, 1.0}, {3, 0.5}, {5, 0.2}, {2, 0.9}, {5, 0.4}};
    const auto strict = aps_sensed_analysis(samples, 2);
    REQUIRE(strict.size() == 2);
    CHECK(strict[0].aps_sensed == 3);
    CHECK(strict[0].mean_satisfaction == doctest::Approx(0.75));
    CHECK(strict[0].samples == 2);
    CHECK(strict[1].aps_sensed == 5);
    CHECK(strict[1].mean_satisfaction == doctest::Approx(0.3));

    const auto loose = aps_sensed_analysis(samples, 1);
    REQUIRE(loose.size() == 3);
    CHECK(loose[0].aps_sensed == 2);  // sorted by APs sensed
    CHECK_THROWS_AS(aps_sensed_analysis(samples, 0), std::invalid_argument);
}

TEST_CASE("policy labels are stable identifiers") {
    PolicySpec p;
    p.kind = PolicyKind::strongest_signal;
    CHECK(policy_label(p) == "ss");
    p.kind = PolicyKind::epsilon_greedy;
    p.epsilon = {EpsilonSchedule::Kind::constant, 0.02};
    CHECK(policy_label(p) == "greedy-eps0.02");
    p.kind = PolicyKind::epsilon_sticky;
    p.epsilon = {EpsilonSchedule::Kind::constant, 0.5};
    p.sticky_limit = 4;
    CHECK(policy_label(p) == "sticky-eps0.5-sc4");
    p.epsilon.kind = EpsilonSchedule::Kind::inverse_sqrt;
    CHECK(policy_label(p) == "sticky-epsinvsqrt-sc4");
    p.epsilon.kind = EpsilonSchedule::Kind::inverse;
    p.sticky_limit = 2;
    CHECK(policy_label(p) == "sticky-epsinv-sc2");
}

TEST_CASE("sweep expansion crosses the configured axes") {
    ExperimentConfig c = tiny_config();
    SUBCASE("no axes yields the base point") {
        const auto points = expand_sweep(c);
        REQUIRE(points.size() == 1);
        CHECK(points[0].id == "sticky-eps0.1-sc2");
    }
    SUBCASE("epsilon by sticky grid") {
        c.sweep.epsilon = {0.1, 0.2};
        c.sweep.sticky_limit = {1, 2};
        const auto points = expand_sweep(c);
        REQUIRE(points.size() == 4);
        CHECK(points[0].id == "sticky-eps0.1-sc1");
        CHECK(points[3].id == "sticky-eps0.2-sc2");
        CHECK(points[3].policy.epsilon.value == 0.2);
        CHECK(points[3].policy.sticky_limit == 2);
    }
    SUBCASE("ap and demand axes rewrite the scenario") {
        c.scenario.aps = {ApPlacementSpec::Kind::uniform, 0, 0, 16};
        c.sweep.ap_count = {8, 32};
        c.sweep.demand_bps = {2e6};
        const auto points = expand_sweep(c);
        REQUIRE(points.size() == 2);
        CHECK(points[0].id == "sticky-eps0.1-sc2-ap8-w2");
        CHECK(points[0].scenario.aps.count == 8);
        CHECK(points[1].scenario.aps.count == 32);
        CHECK(points[0].scenario.demand_bps == 2e6);
    }
}

TEST_CASE("config validation rejects inconsistent sweeps") {
    ExperimentConfig c = tiny_config();
    CHECK_NOTHROW(c.validate());
    c.periods = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = tiny_config();
    c.repetitions = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = tiny_config();
    c.policy.kind = PolicyKind::strongest_signal;
    c.sweep.epsilon = {0.1};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = tiny_config();
    c.policy.kind = PolicyKind::epsilon_greedy;
    c.sweep.sticky_limit = {2};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = tiny_config();
    c.sweep.ap_count = {8};  // grid placement cannot take an AP-count axis
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = tiny_config();
    c.sweep.epsilon = {1.5};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = tiny_config();
    c.policy.epsilon.value = -0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("sweep point aggregation is deterministic and thread-invariant") {
    ExperimentConfig c = tiny_config();
    const SweepPoint point{"probe", c.scenario, c.policy};
    const AggregateSeries serial = run_sweep_point(c, point);

    REQUIRE(serial.mean_satisfaction.size() == static_cast<std::size_t>(c.periods));
    REQUIRE(serial.std_satisfaction.size() == static_cast<std::size_t>(c.periods));
    REQUIRE(serial.satisfied_count.size() == static_cast<std::size_t>(c.periods));
    REQUIRE(serial.mean_throughput_bps.size() == static_cast<std::size_t>(c.periods));
    REQUIRE(serial.rep_seeds.size() == 3);
    CHECK(serial.rep_seeds[0] != serial.rep_seeds[1]);
    for (double v : serial.mean_satisfaction) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (double v : serial.satisfied_count) {
        CHECK(v >= 0.0);
        CHECK(v <= c.scenario.stas.count);
    }
    for (double v : serial.std_satisfaction) CHECK(v >= 0.0);

    ExperimentConfig threaded = c;
    threaded.threads = 3;
    CHECK(same_series(serial, run_sweep_point(threaded, point)));
    CHECK(same_series(serial, run_sweep_point(c, point)));

    ExperimentConfig reseeded = c;
    reseeded.master_seed = 6;
    CHECK_FALSE(same_series(serial, run_sweep_point(reseeded, point)));
}

TEST_CASE("single repetition aggregates to the run itself") {
    ExperimentConfig c = tiny_config();
    c.repetitions = 1;
    const SweepPoint point{"solo", c.scenario, c.policy};
    const AggregateSeries agg = run_sweep_point(c, point);
    for (double v : agg.std_satisfaction) CHECK(v == 0.0);
    CHECK(agg.final_satisfied_std == 0.0);

    // the first repetition of a longer batch replays it exactly
    ExperimentConfig more = c;
    more.repetitions = 3;
    const AggregateSeries batch = run_sweep_point(more, point);
    CHECK(batch.rep_seeds[0] == agg.rep_seeds[0]);
}

TEST_CASE("experiment writes reproducible artifacts") {
    namespace fs = std::filesystem;
    ExperimentConfig c = tiny_config();
    c.sweep.epsilon = {0.05, 0.5};
    c.emit_sensed_analysis = true;
    c.trace_first_rep = true;

    const fs::path dir_a = fs::path("exp_out_a");
    const fs::path dir_b = fs::path("exp_out_b");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    c.output_dir = dir_a.string();
    const auto results_a = run_experiment(experiment_from_config(c));
    c.output_dir = dir_b.string();
    const auto results_b = run_experiment(experiment_from_config(c));

    REQUIRE(results_a.size() == 2);
    for (const AggregateSeries& agg : results_a) {
        const fs::path csv = dir_a / (agg.point_id + ".csv");
        REQUIRE(fs::exists(csv));
        const std::string text = slurp(csv);
        const auto rows = std::count(text.begin(), text.end(), '\n');
        CHECK(rows == c.periods + 1);  // header plus one row per period
        CHECK(text.rfind("period,mean_satisfaction,std_satisfaction,satisfied_count,"
                         "mean_throughput_bps\n",
                         0) == 0);
        CHECK(text.find("nan") == std::string::npos);
        CHECK(slurp(dir_b / (agg.point_id + ".csv")) == text);
        CHECK(fs::exists(dir_a / (agg.point_id + "_sensed.csv")));
        CHECK(fs::exists(dir_a / (agg.point_id + "_rep0.jsonl")));
        CHECK(slurp(dir_a / (agg.point_id + "_rep0.jsonl")) ==
              slurp(dir_b / (agg.point_id + "_rep0.jsonl")));
    }
    CHECK(slurp(dir_a / "manifest.json") == slurp(dir_b / "manifest.json"));

    const auto manifest = nlohmann::json::parse(slurp(dir_a / "manifest.json"));
    CHECK(manifest.at("points").size() == 2);
    CHECK(manifest.at("points")[0].at("rep_seeds").size() == 3);

    // trace lines parse and cover periods 0..periods
    std::istringstream trace(slurp(dir_a / (results_a[0].point_id + "_rep0.jsonl")));
    std::string line;
    int lines = 0;
    while (std::getline(trace, line)) {
        const auto rec = nlohmann::json::parse(line);
        CHECK(rec.at("period") == lines);
        ++lines;
    }
    CHECK(lines == c.periods + 1);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("preset registry is complete and buildable") {
    const auto& registry = preset_registry();
    REQUIRE(registry.size() == 8);
    for (const PresetInfo& info : registry) {
        CHECK(is_preset(info.name));
        const Experiment e = make_preset(info.name);
        CHECK_FALSE(e.points.empty());
        CHECK(e.base.periods == 500);
        CHECK(e.base.repetitions == 100);
        for (const SweepPoint& p : e.points) CHECK_NOTHROW(p.scenario.validate());
    }
    CHECK_FALSE(is_preset("no-such-preset"));
    CHECK_THROWS_AS(make_preset("no-such-preset"), std::invalid_argument);

    CHECK(make_preset("eps-sweep-uniform").points.size() == 9);
    CHECK(make_preset("sticky-sweep-clustered").points.size() == 13);
    CHECK(make_preset("decay-comparison").points.size() == 4);
    CHECK(make_preset("ap-scaling").points.size() == 12);
    CHECK(make_preset("sensed-analysis").points.size() == 3);
    CHECK(make_preset("demand-sweep").points.size() == 12);
    CHECK(make_preset("sensed-analysis").base.emit_sensed_analysis);
}

TEST_CASE("config round-trips through json") {
    ExperimentConfig c = tiny_config();
    c.sweep.epsilon = {0.02, 0.5};
    c.output_dir = "somewhere";
    c.emit_sensed_analysis = true;
    const nlohmann::json j = experiment_config_to_json(c);
    const ExperimentConfig back = experiment_config_from_json(j);
    CHECK(back.scenario.stas.count == c.scenario.stas.count);
    CHECK(back.scenario.n_channels == c.scenario.n_channels);
    CHECK(back.policy.kind == c.policy.kind);
    CHECK(back.policy.epsilon.value == c.policy.epsilon.value);
    CHECK(back.policy.sticky_limit == c.policy.sticky_limit);
    CHECK(back.periods == c.periods);
    CHECK(back.master_seed == c.master_seed);
    CHECK(back.sweep.epsilon == c.sweep.epsilon);
    CHECK(back.output_dir == "somewhere");
    CHECK(back.emit_sensed_analysis);
    CHECK(experiment_config_to_json(back) == j);
}

TEST_CASE("config parsing is strict about keys and values") {
    using nlohmann::json;
    CHECK_THROWS_AS(experiment_config_from_json(json{{"perioods", 5}}), std::invalid_argument);
    CHECK_THROWS_AS(experiment_config_from_json(json{{"policy", {{"kind", "thompson"}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        experiment_config_from_json(json{{"scenario", {{"aps", {{"placement", "ring"}}}}}}),
        std::invalid_argument);
    CHECK_THROWS_AS(experiment_config_from_json(json{{"final_metric", "median"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(experiment_config_from_json(json{{"sweep", {{"epsilon", json::array()}}}}),
                    std::invalid_argument);

    // numeric epsilon shorthand maps to a static schedule
    const ExperimentConfig c =
        experiment_config_from_json(json{{"policy", {{"kind", "greedy"}, {"epsilon", 0.25}}}});
    CHECK(c.policy.kind == PolicyKind::epsilon_greedy);
    CHECK(c.policy.epsilon.kind == EpsilonSchedule::Kind::constant);
    CHECK(c.policy.epsilon.value == 0.25);
}

TEST_CASE("scenario audit export carries the full deployment") {
    ExperimentConfig c = tiny_config();
    const Scenario scn = build_scenario(c.scenario, 99);
    const nlohmann::json j = scenario_to_json(scn);
    CHECK(j.at("seed") == 99);
    REQUIRE(j.at("aps").size() == 4);
    REQUIRE(j.at("stas").size() == 12);
    CHECK(j.at("stas")[0].at("links").size() == 4);
    const auto& link = j.at("stas")[0].at("links")[0];
    CHECK(link.at("received_power_dbm").get<double>() ==
          scn.links[0][0].received_power_dbm);
    CHECK(j.at("stas")[0].at("detected_aps").get<std::vector<int>>() == scn.detected_aps[0]);
}
