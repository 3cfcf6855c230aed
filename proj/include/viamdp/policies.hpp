#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "viamdp/model.hpp"

namespace viamdp {

/// Deterministic state->action map in canonical order.
struct ActionTable {
    int e_max = 0;
    int delta_max = 0;
    std::vector<std::uint8_t> action;

    int index(const State& s) const { return (s.e * 2 + s.x) * (delta_max + 1) + s.delta; }
    Action at(const State& s) const { return action[index(s)]; }
    int size() const { return static_cast<int>(action.size()); }
};

ActionTable make_action_table(const SystemParams& params);  // all idle

/// Transmit with fixed probability p_alpha whenever the battery is nonempty.
struct RandomizedStationary {
    double p_alpha = 0.5;
};

/// Transmit whenever the battery is nonempty.
struct Greedy {};

using Policy = std::variant<ActionTable, RandomizedStationary, Greedy>;

/// Transmit probability in state s. Always 0 when the battery is empty.
double action_distribution(const Policy& policy, const State& s);

/// Samples the action from one uniform draw u in [0,1): 1 iff u < prob.
Action decide(const Policy& policy, const State& s, double u);

/// Renders a policy with degenerate (0/1) action probabilities as a table;
/// throws std::invalid_argument for genuinely stochastic policies.
ActionTable deterministic_table(const Policy& policy, const SystemParams& params);

}  // namespace viamdp
