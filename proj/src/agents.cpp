#include "apsim/agents.hpp"

#include <cmath>
#include <stdexcept>

namespace apsim {

double epsilon_value(const EpsilonSchedule& schedule, int period) {
    if (period < 1) throw std::invalid_argument("epsilon_value: period must be >= 1");
    switch (schedule.kind) {
        case EpsilonSchedule::Kind::constant: return schedule.value;
        case EpsilonSchedule::Kind::inverse_sqrt: return 1.0 / std::sqrt(static_cast<double>(period));
        case EpsilonSchedule::Kind::inverse: return 1.0 / static_cast<double>(period);
    }
    throw std::logic_error("epsilon_value: unknown schedule");
}

int strongest_signal(const std::vector<LinkBudget>& sta_links) {
    int best = -1;
    double best_rx = 0.0;
    for (std::size_t j = 0; j < sta_links.size(); ++j) {
        if (!sta_links[j].detectable) continue;
        if (best < 0 || sta_links[j].received_power_dbm > best_rx) {
            best = static_cast<int>(j);
            best_rx = sta_links[j].received_power_dbm;
        }
    }
    return best;
}

int decide_greedy(const AgentState& state, double epsilon, bool exclude_current, Rng& rng) {
    const auto& detected = state.detected_aps;
    if (detected.empty()) throw std::logic_error("decide_greedy: no detectable APs");

    if (rng.bernoulli(epsilon)) {
        if (exclude_current && detected.size() > 1) {
            std::size_t cur = detected.size();
            for (std::size_t i = 0; i < detected.size(); ++i)
                if (detected[i] == state.current_ap) { cur = i; break; }
            if (cur < detected.size()) {
                std::size_t pick = rng.uniform_index(detected.size() - 1);
                if (pick >= cur) ++pick;
                return detected[pick];
            }
        }
        return detected[rng.uniform_index(detected.size())];
    }

    // exploit: detected_aps is ascending, so the first strict maximum is the
    // lowest-index tie winner
    std::size_t best = 0;
    for (std::size_t i = 1; i < detected.size(); ++i)
        if (state.accumulated_reward[i] > state.accumulated_reward[best]) best = i;
    return detected[best];
}

int decide_sticky(const AgentState& state, double epsilon, bool exclude_current, Rng& rng) {
    if (state.mode == AgentMode::sticky_hold) return state.current_ap;
    return decide_greedy(state, epsilon, exclude_current, rng);
}

void update_agent(AgentState& state, const PolicySpec& policy, double reward, bool satisfied) {
    for (std::size_t i = 0; i < state.detected_aps.size(); ++i) {
        if (state.detected_aps[i] == state.current_ap) {
            state.accumulated_reward[i] += reward;
            break;
        }
    }
    if (policy.kind != PolicyKind::epsilon_sticky) return;

    if (satisfied) {
        state.mode = AgentMode::sticky_hold;
        state.consecutive_unsatisfied = 0;
    } else if (state.mode == AgentMode::sticky_hold) {
        if (++state.consecutive_unsatisfied >= policy.sticky_limit) {
            state.mode = AgentMode::bandit;
            state.consecutive_unsatisfied = 0;
        }
    }
}

}  // namespace apsim
