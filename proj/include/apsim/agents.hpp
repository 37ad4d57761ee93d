#pragma once

#include <vector>

#include "apsim/radio.hpp"
#include "apsim/rng.hpp"

namespace apsim {

enum class PolicyKind { strongest_signal, epsilon_greedy, epsilon_sticky };

struct EpsilonSchedule {
    enum class Kind { constant, inverse_sqrt, inverse };
    Kind kind = Kind::constant;
    double value = 0.02;  // used by constant only
};

// Exploration probability at association period t >= 1.
double epsilon_value(const EpsilonSchedule& schedule, int period);

struct PolicySpec {
    PolicyKind kind = PolicyKind::epsilon_sticky;
    EpsilonSchedule epsilon;
    int sticky_limit = 1;  // consecutive unsatisfied periods tolerated while holding
    bool explore_excludes_current = false;  // by default exploring may re-draw the current AP
};

enum class AgentMode { bandit, sticky_hold };

// Per-STA bandit memory. accumulated_reward is parallel to detected_aps.
struct AgentState {
    std::vector<int> detected_aps;  // ascending AP index
    std::vector<double> accumulated_reward;
    int current_ap = -1;  // global AP index, -1 when unassociated
    int consecutive_unsatisfied = 0;
    AgentMode mode = AgentMode::bandit;
};

// Detectable AP with the highest received power; ties go to the lowest AP
// index. Returns -1 when nothing is detectable.
int strongest_signal(const std::vector<LinkBudget>& sta_links);

// With probability epsilon a uniform draw over the detected APs, otherwise
// the AP with the highest accumulated reward (ties to the lowest AP index).
int decide_greedy(const AgentState& state, double epsilon, bool exclude_current, Rng& rng);

// Holding agents keep their AP without touching the RNG; otherwise identical
// to decide_greedy on the same stream.
int decide_sticky(const AgentState& state, double epsilon, bool exclude_current, Rng& rng);

// Accumulates the period reward on the current AP and, for the sticky
// policy, advances the hold/explore automaton:
//   satisfied               -> hold, counter reset
//   unsatisfied while holding-> counter++, release to bandit when it hits
//                               sticky_limit
//   unsatisfied in bandit    -> no counter change
void update_agent(AgentState& state, const PolicySpec& policy, double reward, bool satisfied);

}  // namespace apsim
