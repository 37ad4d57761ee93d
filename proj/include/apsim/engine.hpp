#pragma once

#include <cstdint>
#include <vector>

#include "apsim/agents.hpp"
#include "apsim/scenario.hpp"

namespace apsim {

// A station counts as satisfied when its served fraction is numerically 1.
inline constexpr double kSatisfiedTolerance = 1e-9;

// Outcome of evaluating one association snapshot. Indexes follow the
// scenario; unassociated stations get zero airtime, zero reward and are
// never satisfied.
struct PeriodEvaluation {
    std::vector<double> airtime;          // u_i, per STA
    std::vector<double> reward;           // airtime actually received, per STA
    std::vector<double> served_fraction;  // reward / airtime (1 for zero demand)
    std::vector<std::uint8_t> satisfied;
    std::vector<double> ap_occupancy;  // per AP, capped at 1
};

struct PeriodRecord {
    int period = 0;  // 0 is the initial strongest-signal association
    std::vector<int> association;  // per STA AP index, -1 when unassociated
    std::vector<double> served_fraction;
    std::vector<std::uint8_t> satisfied;
    std::vector<double> served_throughput_bps;  // demand * served fraction
    std::vector<double> ap_occupancy;
    int satisfied_count = 0;
    double mean_served_fraction = 0.0;
};

/// Stations contending for AP j's channel time: its own stations plus the
// stations of every co-channel AP within its coverage. Ascending STA index.
std::vector<int> neighbor_set(int ap, const Scenario& scenario,
                              const std::vector<int>& association);

PeriodEvaluation evaluate_period(const Scenario& scenario, const std::vector<int>& association);

// Association-period loop. Each period is a three-phase step: all agents
// decide against their own previous-period state, the resulting association
// is evaluated, then every agent is updated with its reward. Per-STA decision
// streams are derived from (seed, agent tag, STA index), so outcomes do not
// depend on evaluation order.
class Engine {
public:
    Engine(const Scenario& scenario, const PolicySpec& policy, std::uint64_t seed);

    // Period 0: strongest-signal association, evaluated and fed back to the
    // agents like any other period.
    PeriodRecord run_initial();

    // Next association period; requires run_initial() to have run.
    PeriodRecord run_period();

    const std::vector<AgentState>& agents() const { return agents_; }
    const std::vector<int>& association() const { return association_; }
    int period() const { return period_; }

private:
    PeriodRecord make_record(const PeriodEvaluation& eval) const;
    void apply_updates(const PeriodEvaluation& eval);

    const Scenario* scenario_;
    PolicySpec policy_;
    std::vector<AgentState> agents_;
    std::vector<Rng> rngs_;  // one private stream per STA
    std::vector<int> association_;
    int period_ = -1;
};

struct SimulationResult {
    std::vector<PeriodRecord> records;  // size periods + 1, record 0 is the SS period
    std::vector<AgentState> final_agents;
};

SimulationResult run_simulation(const Scenario& scenario, const PolicySpec& policy, int periods,
                                std::uint64_t seed);

}  // namespace apsim
