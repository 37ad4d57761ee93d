#include "apsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace apsim {

std::vector<int> neighbor_set(int ap, const Scenario& scenario,
                              const std::vector<int>& association) {
    std::vector<std::uint8_t> in_set(scenario.n_aps(), 0);
    in_set[ap] = 1;
    for (int other : scenario.co_channel_neighbors[ap]) in_set[other] = 1;
    std::vector<int> stas;
    for (int i = 0; i < scenario.n_stas(); ++i)
        if (association[i] >= 0 && in_set[association[i]]) stas.push_back(i);
    return stas;
}

PeriodEvaluation evaluate_period(const Scenario& scenario, const std::vector<int>& association) {
    const int n = scenario.n_stas();
    const int m = scenario.n_aps();
    PeriodEvaluation eval;
    eval.airtime.assign(n, 0.0);
    eval.reward.assign(n, 0.0);
    eval.served_fraction.assign(n, 0.0);
    eval.satisfied.assign(n, 0);
    eval.ap_occupancy.assign(m, 0.0);

    std::vector<double> ap_load(m, 0.0);  // summed airtime of each AP's own stations
    for (int i = 0; i < n; ++i) {
        const int j = association[i];
        if (j < 0) continue;
        const LinkBudget& link = scenario.links[i][j];
        if (!link.detectable)
            throw std::logic_error("evaluate_period: station associated to an undetectable AP");
        eval.airtime[i] = required_airtime(scenario.stas[i].demand, link.bits_per_symbol,
                                           link.legacy_bits_per_symbol, scenario.mac);
        ap_load[j] += eval.airtime[i];
    }

    // Contention at AP j sums its own load plus every co-channel AP in range.
    std::vector<double> set_sum(m, 0.0);
    for (int j = 0; j < m; ++j) {
        double sum = ap_load[j];
        for (int other : scenario.co_channel_neighbors[j]) sum += ap_load[other];
        set_sum[j] = sum;
        eval.ap_occupancy[j] = std::min(1.0, sum);
    }

    for (int i = 0; i < n; ++i) {
        const int j = association[i];
        if (j < 0) continue;
        const double share = std::max(1.0, set_sum[j]);
        eval.reward[i] = eval.airtime[i] / share;
        eval.served_fraction[i] = eval.airtime[i] > 0.0 ? 1.0 / share : 1.0;
        eval.satisfied[i] = eval.served_fraction[i] >= 1.0 - kSatisfiedTolerance ? 1 : 0;
    }
    return eval;
}

Engine::Engine(const Scenario& scenario, const PolicySpec& policy, std::uint64_t seed)
    : scenario_(&scenario), policy_(policy) {
    const int n = scenario.n_stas();
    agents_.resize(n);
    association_.assign(n, -1);
    rngs_.reserve(n);
    for (int i = 0; i < n; ++i) {
        rngs_.emplace_back(derive_seed(seed, streams::agent, static_cast<std::uint64_t>(i)));
        agents_[i].detected_aps = scenario.detected_aps[i];
        agents_[i].accumulated_reward.assign(agents_[i].detected_aps.size(), 0.0);
    }
}

PeriodRecord Engine::run_initial() {
    if (period_ >= 0) throw std::logic_error("engine: run_initial called twice");
    period_ = 0;
    for (int i = 0; i < scenario_->n_stas(); ++i) {
        association_[i] = strongest_signal(scenario_->links[i]);
        agents_[i].current_ap = association_[i];
    }
    const PeriodEvaluation eval = evaluate_period(*scenario_, association_);
    apply_updates(eval);
    return make_record(eval);
}

PeriodRecord Engine::run_period() {
    if (period_ < 0) throw std::logic_error("engine: run_initial must run first");
    ++period_;

    if (policy_.kind != PolicyKind::strongest_signal) {
        const double eps = epsilon_value(policy_.epsilon, period_);
        for (int i = 0; i < scenario_->n_stas(); ++i) {
            AgentState& agent = agents_[i];
            if (agent.detected_aps.empty()) continue;  // unassociated for the whole run
            const int choice = policy_.kind == PolicyKind::epsilon_sticky
                                   ? decide_sticky(agent, eps, policy_.explore_excludes_current,
                                                   rngs_[i])
                                   : decide_greedy(agent, eps, policy_.explore_excludes_current,
                                                   rngs_[i]);
            association_[i] = choice;
            agent.current_ap = choice;
        }
    }

    const PeriodEvaluation eval = evaluate_period(*scenario_, association_);
    apply_updates(eval);
    return make_record(eval);
}

void Engine::apply_updates(const PeriodEvaluation& eval) {
    for (int i = 0; i < scenario_->n_stas(); ++i) {
        if (association_[i] < 0) continue;
        update_agent(agents_[i], policy_, eval.served_fraction[i], eval.satisfied[i] != 0);
    }
}

PeriodRecord Engine::make_record(const PeriodEvaluation& eval) const {
    PeriodRecord rec;
    rec.period = period_;
    rec.association = association_;
    rec.served_fraction = eval.served_fraction;
    rec.satisfied = eval.satisfied;
    rec.ap_occupancy = eval.ap_occupancy;
    rec.served_throughput_bps.resize(scenario_->n_stas());
    double fraction_sum = 0.0;
    for (int i = 0; i < scenario_->n_stas(); ++i) {
        rec.served_throughput_bps[i] =
            scenario_->stas[i].demand.throughput_bps * eval.served_fraction[i];
        rec.satisfied_count += eval.satisfied[i];
        fraction_sum += eval.served_fraction[i];
    }
    rec.mean_served_fraction = scenario_->n_stas() > 0 ? fraction_sum / scenario_->n_stas() : 0.0;
    return rec;
}

SimulationResult run_simulation(const Scenario& scenario, const PolicySpec& policy, int periods,
                                std::uint64_t seed) {
    if (periods < 0) throw std::invalid_argument("run_simulation: periods must be >= 0");
    Engine engine(scenario, policy, seed);
    SimulationResult result;
    result.records.reserve(periods + 1);
    result.records.push_back(engine.run_initial());
    for (int t = 1; t <= periods; ++t) result.records.push_back(engine.run_period());
    result.final_agents = engine.agents();
    return result;
}

}  // namespace apsim
