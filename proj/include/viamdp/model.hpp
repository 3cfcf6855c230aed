#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "viamdp/params.hpp"

namespace viamdp {

/// One point of the MDP state space: battery level, source state, age.
struct State {
    int e = 0;      // battery level in [0, e_max]
    int x = 0;      // source state, 0 or 1
    int delta = 0;  // version innovation age in [0, delta_max]

    auto operator<=>(const State&) const = default;
};

/// 0 = idle, 1 = transmit.
using Action = int;

/// Sparse one-step distribution over successor states. Entries carry
/// strictly positive probabilities and are unique after clamp merging.
struct TransitionRow {
    std::vector<std::pair<State, double>> entries;

    void add(const State& s, double prob);  // merges duplicate successors
    double total() const;
};

// Canonical state ordering: lexicographic by (e, x, delta). Every table in
// the solver, evaluator and file formats is indexed this way.
int state_count(const SystemParams& params);
int state_index(const SystemParams& params, const State& s);
State state_at(const SystemParams& params, int index);
bool in_bounds(const SystemParams& params, const State& s);
std::vector<State> enumerate_states(const SystemParams& params);

/// Pr[X_{t+1} = x_next | X_t = x] for the two-state source chain.
double source_transition_prob(int x, int x_next, const SystemParams& params);

/// Age recursion for one slot. `source_changed` is the X_{t+1} != X_t flag,
/// `h` the channel outcome (ignored unless a = 1):
///   unchanged + no delivery -> delta, changed + no delivery -> delta+1 (capped),
///   changed + delivered -> 1, unchanged + delivered -> 0.
int via_step(int delta, bool source_changed, Action a, bool h, const SystemParams& params);

/// min{e + b - a, e_max}. Transmitting from an empty battery is a contract
/// violation here; callers coerce the action to idle first.
int battery_step(int e, int b, Action a, const SystemParams& params);

/// Exact one-step kernel Pr[S' | S, a]. For e = 0 both actions yield the
/// identical row; at delta = 0 a transmission's channel outcome is
/// irrelevant to the successor and the success/failure branches merge.
TransitionRow transition_kernel(const State& s, Action a, const SystemParams& params);

/// Kernel self-check over every (state, action) pair: probabilities
/// positive, rows sum to 1 within 1e-12, successors in bounds, entries
/// unique, and the e = 0 rows identical for both actions.
struct KernelReport {
    std::vector<std::string> violations;
    int rows_checked = 0;

    bool ok() const { return violations.empty(); }
};

KernelReport validate_kernel(const SystemParams& params);

}  // namespace viamdp
