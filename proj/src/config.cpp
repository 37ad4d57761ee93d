#include "apsim/config.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace apsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw std::invalid_argument("config: " + context + ": " + message);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
    if (!j.is_object()) fail(context, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) fail(context, "unknown key \"" + key + "\"");
    }
}

const char* policy_kind_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::strongest_signal: return "strongest_signal";
        case PolicyKind::epsilon_greedy: return "epsilon_greedy";
        case PolicyKind::epsilon_sticky: return "epsilon_sticky";
    }
    throw std::logic_error("unknown policy kind");
}

PolicyKind policy_kind_from(const std::string& name) {
    if (name == "strongest_signal" || name == "ss") return PolicyKind::strongest_signal;
    if (name == "epsilon_greedy" || name == "greedy") return PolicyKind::epsilon_greedy;
    if (name == "epsilon_sticky" || name == "sticky") return PolicyKind::epsilon_sticky;
    fail("policy.kind", "unknown value \"" + name + "\"");
}

const char* schedule_kind_name(EpsilonSchedule::Kind kind) {
    switch (kind) {
        case EpsilonSchedule::Kind::constant: return "static";
        case EpsilonSchedule::Kind::inverse_sqrt: return "inverse_sqrt";
        case EpsilonSchedule::Kind::inverse: return "inverse";
    }
    throw std::logic_error("unknown schedule kind");
}

EpsilonSchedule::Kind schedule_kind_from(const std::string& name) {
    if (name == "static" || name == "constant") return EpsilonSchedule::Kind::constant;
    if (name == "inverse_sqrt") return EpsilonSchedule::Kind::inverse_sqrt;
    if (name == "inverse") return EpsilonSchedule::Kind::inverse;
    fail("policy.epsilon.kind", "unknown value \"" + name + "\"");
}

}  // namespace

json policy_spec_to_json(const PolicySpec& policy) {
    json j;
    j["kind"] = policy_kind_name(policy.kind);
    j["epsilon"] = {{"kind", schedule_kind_name(policy.epsilon.kind)}};
    if (policy.epsilon.kind == EpsilonSchedule::Kind::constant)
        j["epsilon"]["value"] = policy.epsilon.value;
    j["sticky_limit"] = policy.sticky_limit;
    j["explore_excludes_current"] = policy.explore_excludes_current;
    return j;
}

PolicySpec policy_spec_from_json(const json& j) {
    check_keys(j, {"kind", "epsilon", "sticky_limit", "explore_excludes_current"}, "policy");
    PolicySpec p;
    if (j.contains("kind")) p.kind = policy_kind_from(j.at("kind").get<std::string>());
    if (j.contains("epsilon")) {
        const json& e = j.at("epsilon");
        if (e.is_number()) {
            p.epsilon = {EpsilonSchedule::Kind::constant, e.get<double>()};
        } else {
            check_keys(e, {"kind", "value"}, "policy.epsilon");
            if (e.contains("kind"))
                p.epsilon.kind = schedule_kind_from(e.at("kind").get<std::string>());
            if (e.contains("value")) p.epsilon.value = e.at("value").get<double>();
        }
    }
    p.sticky_limit = j.value("sticky_limit", p.sticky_limit);
    p.explore_excludes_current = j.value("explore_excludes_current", p.explore_excludes_current);
    return p;
}

json scenario_spec_to_json(const ScenarioSpec& spec) {
    json j;
    j["area"] = {spec.area.width, spec.area.height};
    if (spec.aps.kind == ApPlacementSpec::Kind::grid)
        j["aps"] = {{"placement", "grid"}, {"rows", spec.aps.rows}, {"cols", spec.aps.cols}};
    else
        j["aps"] = {{"placement", "uniform"}, {"count", spec.aps.count}};
    if (spec.stas.kind == StaPlacementSpec::Kind::uniform)
        j["stas"] = {{"placement", "uniform"}, {"count", spec.stas.count}};
    else
        j["stas"] = {{"placement", "clustered"},
                     {"count", spec.stas.count},
                     {"per_cluster", spec.stas.per_cluster},
                     {"cluster_side", spec.stas.cluster_side}};
    j["channels"] = spec.n_channels;
    j["tx_power_dbm"] = spec.tx_power_dbm;
    j["demand_bps"] = spec.demand_bps;
    j["path_loss"] = {{"l0_db", spec.path_loss.l0_db},
                      {"exponent", spec.path_loss.exponent},
                      {"wall_attenuation_db", spec.path_loss.wall_attenuation_db},
                      {"walls_per_meter", spec.path_loss.walls_per_meter},
                      {"shadowing_max_db", spec.path_loss.shadowing_max_db}};
    json entries = json::array();
    for (const RateEntry& e : spec.rate_policy.entries)
        entries.push_back({{"min_rx_dbm", e.min_rx_dbm},
                           {"bits_per_symbol", e.bits_per_symbol},
                           {"legacy_bits_per_symbol", e.legacy_bits_per_symbol}});
    j["rate_policy"] = {{"detection_threshold_dbm", spec.rate_policy.detection_threshold_dbm},
                        {"entries", entries}};
    j["mac"] = {{"t_phy_legacy", spec.mac.t_phy_legacy},
                {"t_phy_he_su", spec.mac.t_phy_he_su},
                {"symbol", spec.mac.symbol},
                {"legacy_symbol", spec.mac.legacy_symbol},
                {"sifs", spec.mac.sifs},
                {"difs", spec.mac.difs},
                {"mean_backoff_slots", spec.mac.mean_backoff_slots},
                {"t_empty_slot", spec.mac.t_empty_slot},
                {"service_field_bits", spec.mac.service_field_bits},
                {"mac_header_bits", spec.mac.mac_header_bits},
                {"tail_bits", spec.mac.tail_bits},
                {"ack_bits", spec.mac.ack_bits},
                {"frame_bits", spec.mac.frame_bits}};
    return j;
}

ScenarioSpec scenario_spec_from_json(const json& j) {
    check_keys(j,
               {"area", "aps", "stas", "channels", "tx_power_dbm", "demand_bps", "path_loss",
                "rate_policy", "mac"},
               "scenario");
    ScenarioSpec s;
    if (j.contains("area")) {
        const json& a = j.at("area");
        if (!a.is_array() || a.size() != 2) fail("scenario.area", "expected [width, height]");
        s.area.width = a[0].get<double>();
        s.area.height = a[1].get<double>();
    }
    if (j.contains("aps")) {
        const json& a = j.at("aps");
        check_keys(a, {"placement", "rows", "cols", "count"}, "scenario.aps");
        const std::string placement = a.value("placement", "grid");
        if (placement == "grid") {
            s.aps.kind = ApPlacementSpec::Kind::grid;
            s.aps.rows = a.value("rows", s.aps.rows);
            s.aps.cols = a.value("cols", s.aps.cols);
        } else if (placement == "uniform") {
            s.aps.kind = ApPlacementSpec::Kind::uniform;
            s.aps.count = a.value("count", s.aps.count);
        } else {
            fail("scenario.aps.placement", "unknown value \"" + placement + "\"");
        }
    }
    if (j.contains("stas")) {
        const json& a = j.at("stas");
        check_keys(a, {"placement", "count", "per_cluster", "cluster_side"}, "scenario.stas");
        const std::string placement = a.value("placement", "uniform");
        if (placement == "uniform") {
            s.stas.kind = StaPlacementSpec::Kind::uniform;
        } else if (placement == "clustered") {
            s.stas.kind = StaPlacementSpec::Kind::clustered;
        } else {
            fail("scenario.stas.placement", "unknown value \"" + placement + "\"");
        }
        s.stas.count = a.value("count", s.stas.count);
        s.stas.per_cluster = a.value("per_cluster", s.stas.per_cluster);
        s.stas.cluster_side = a.value("cluster_side", s.stas.cluster_side);
    }
    s.n_channels = j.value("channels", s.n_channels);
    s.tx_power_dbm = j.value("tx_power_dbm", s.tx_power_dbm);
    s.demand_bps = j.value("demand_bps", s.demand_bps);
    if (j.contains("path_loss")) {
        const json& p = j.at("path_loss");
        check_keys(p,
                   {"l0_db", "exponent", "wall_attenuation_db", "walls_per_meter",
                    "shadowing_max_db"},
                   "scenario.path_loss");
        s.path_loss.l0_db = p.value("l0_db", s.path_loss.l0_db);
        s.path_loss.exponent = p.value("exponent", s.path_loss.exponent);
        s.path_loss.wall_attenuation_db =
            p.value("wall_attenuation_db", s.path_loss.wall_attenuation_db);
        s.path_loss.walls_per_meter = p.value("walls_per_meter", s.path_loss.walls_per_meter);
        s.path_loss.shadowing_max_db = p.value("shadowing_max_db", s.path_loss.shadowing_max_db);
    }
    if (j.contains("rate_policy")) {
        const json& r = j.at("rate_policy");
        check_keys(r, {"detection_threshold_dbm", "entries"}, "scenario.rate_policy");
        s.rate_policy.detection_threshold_dbm =
            r.value("detection_threshold_dbm", s.rate_policy.detection_threshold_dbm);
        if (r.contains("entries")) {
            const json& entries = r.at("entries");
            if (!entries.is_array()) fail("scenario.rate_policy.entries", "expected an array");
            s.rate_policy.entries.clear();
            for (const json& e : entries) {
                check_keys(e, {"min_rx_dbm", "bits_per_symbol", "legacy_bits_per_symbol"},
                           "scenario.rate_policy.entries[]");
                s.rate_policy.entries.push_back({e.at("min_rx_dbm").get<double>(),
                                                 e.at("bits_per_symbol").get<int>(),
                                                 e.at("legacy_bits_per_symbol").get<int>()});
            }
        }
    }
    if (j.contains("mac")) {
        const json& m = j.at("mac");
        check_keys(m,
                   {"t_phy_legacy", "t_phy_he_su", "symbol", "legacy_symbol", "sifs", "difs",
                    "mean_backoff_slots", "t_empty_slot", "service_field_bits", "mac_header_bits",
                    "tail_bits", "ack_bits", "frame_bits"},
                   "scenario.mac");
        s.mac.t_phy_legacy = m.value("t_phy_legacy", s.mac.t_phy_legacy);
        s.mac.t_phy_he_su = m.value("t_phy_he_su", s.mac.t_phy_he_su);
        s.mac.symbol = m.value("symbol", s.mac.symbol);
        s.mac.legacy_symbol = m.value("legacy_symbol", s.mac.legacy_symbol);
        s.mac.sifs = m.value("sifs", s.mac.sifs);
        s.mac.difs = m.value("difs", s.mac.difs);
        s.mac.mean_backoff_slots = m.value("mean_backoff_slots", s.mac.mean_backoff_slots);
        s.mac.t_empty_slot = m.value("t_empty_slot", s.mac.t_empty_slot);
        s.mac.service_field_bits = m.value("service_field_bits", s.mac.service_field_bits);
        s.mac.mac_header_bits = m.value("mac_header_bits", s.mac.mac_header_bits);
        s.mac.tail_bits = m.value("tail_bits", s.mac.tail_bits);
        s.mac.ack_bits = m.value("ack_bits", s.mac.ack_bits);
        s.mac.frame_bits = m.value("frame_bits", s.mac.frame_bits);
    }
    return s;
}

json experiment_config_to_json(const ExperimentConfig& config) {
    json j;
    j["scenario"] = scenario_spec_to_json(config.scenario);
    j["policy"] = policy_spec_to_json(config.policy);
    j["periods"] = config.periods;
    j["repetitions"] = config.repetitions;
    j["seed"] = config.master_seed;
    j["output_dir"] = config.output_dir;
    j["final_metric"] = config.final_metric_last_period_only ? "last_period" : "window";
    j["sensed_min_samples"] = config.sensed_min_samples;
    j["emit_sensed_analysis"] = config.emit_sensed_analysis;
    j["trace_first_rep"] = config.trace_first_rep;
    j["threads"] = config.threads;
    json sweep = json::object();
    if (!config.sweep.epsilon.empty()) sweep["epsilon"] = config.sweep.epsilon;
    if (!config.sweep.sticky_limit.empty()) sweep["sticky_limit"] = config.sweep.sticky_limit;
    if (!config.sweep.ap_count.empty()) sweep["ap_count"] = config.sweep.ap_count;
    if (!config.sweep.demand_bps.empty()) sweep["demand_bps"] = config.sweep.demand_bps;
    if (!sweep.empty()) j["sweep"] = sweep;
    return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    check_keys(j,
               {"scenario", "policy", "periods", "repetitions", "seed", "output_dir",
                "final_metric", "sensed_min_samples", "emit_sensed_analysis", "trace_first_rep",
                "threads", "sweep"},
               "experiment");
    ExperimentConfig c;
    if (j.contains("scenario")) c.scenario = scenario_spec_from_json(j.at("scenario"));
    if (j.contains("policy")) c.policy = policy_spec_from_json(j.at("policy"));
    c.periods = j.value("periods", c.periods);
    c.repetitions = j.value("repetitions", c.repetitions);
    c.master_seed = j.value("seed", c.master_seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("final_metric")) {
        const std::string fm = j.at("final_metric").get<std::string>();
        if (fm == "window")
            c.final_metric_last_period_only = false;
        else if (fm == "last_period")
            c.final_metric_last_period_only = true;
        else
            fail("experiment.final_metric", "expected \"window\" or \"last_period\"");
    }
    c.sensed_min_samples = j.value("sensed_min_samples", c.sensed_min_samples);
    c.emit_sensed_analysis = j.value("emit_sensed_analysis", c.emit_sensed_analysis);
    c.trace_first_rep = j.value("trace_first_rep", c.trace_first_rep);
    c.threads = j.value("threads", c.threads);
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, {"epsilon", "sticky_limit", "ap_count", "demand_bps"}, "experiment.sweep");
        const auto read_axis = [&](const char* key, auto& out) {
            if (!s.contains(key)) return;
            s.at(key).get_to(out);
            if (out.empty()) fail(std::string("experiment.sweep.") + key, "axis must be nonempty");
        };
        read_axis("epsilon", c.sweep.epsilon);
        read_axis("sticky_limit", c.sweep.sticky_limit);
        read_axis("ap_count", c.sweep.ap_count);
        read_axis("demand_bps", c.sweep.demand_bps);
    }
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    ExperimentConfig c = experiment_config_from_json(j);
    c.validate();
    return c;
}

json scenario_to_json(const Scenario& scenario) {
    json j;
    j["seed"] = scenario.seed;
    j["area"] = {scenario.area.width, scenario.area.height};
    json aps = json::array();
    for (int a = 0; a < scenario.n_aps(); ++a) {
        const Ap& ap = scenario.aps[a];
        aps.push_back({{"pos", {ap.pos.x, ap.pos.y}},
                       {"channel", ap.channel},
                       {"tx_power_dbm", ap.tx_power_dbm},
                       {"co_channel_neighbors", scenario.co_channel_neighbors[a]}});
    }
    j["aps"] = std::move(aps);
    json stas = json::array();
    for (int i = 0; i < scenario.n_stas(); ++i) {
        const Sta& sta = scenario.stas[i];
        json links = json::array();
        for (const LinkBudget& link : scenario.links[i])
            links.push_back({{"distance_m", link.distance_m},
                             {"path_loss_db", link.path_loss_db},
                             {"received_power_dbm", link.received_power_dbm},
                             {"bits_per_symbol", link.bits_per_symbol},
                             {"legacy_bits_per_symbol", link.legacy_bits_per_symbol},
                             {"detectable", link.detectable}});
        stas.push_back({{"pos", {sta.pos.x, sta.pos.y}},
                        {"demand_bps", sta.demand.throughput_bps},
                        {"frame_bits", sta.demand.frame_bits},
                        {"detected_aps", scenario.detected_aps[i]},
                        {"links", std::move(links)}});
    }
    j["stas"] = std::move(stas);
    return j;
}

void write_trace_jsonl(const std::vector<PeriodRecord>& records, std::ostream& out) {
    for (const PeriodRecord& rec : records) {
        json line;
        line["period"] = rec.period;
        line["association"] = rec.association;
        line["served_fraction"] = rec.served_fraction;
        line["satisfied"] = rec.satisfied;
        line["served_throughput_bps"] = rec.served_throughput_bps;
        line["ap_occupancy"] = rec.ap_occupancy;
        line["satisfied_count"] = rec.satisfied_count;
        line["mean_served_fraction"] = rec.mean_served_fraction;
        out << line.dump() << '\n';
    }
}

}  // namespace apsim
