#pragma once

#include <array>
#include <optional>
#include <vector>

#include "viamdp/model.hpp"
#include "viamdp/policies.hpp"

namespace viamdp {

struct SolverOptions {
    double epsilon = 1e-9;      // span-seminorm stopping tolerance
    long max_iters = 1'000'000;
    State reference{0, 0, 0};
    // Aperiodicity transform weight in (0,1]: each sweep mixes the kernel
    // with a self-loop, P -> (1-damping) I + damping P. Gain, policy and
    // the returned (rescaled) value table are unchanged; span convergence
    // no longer depends on the chain being aperiodic.
    double damping = 0.5;
    std::vector<double> initial_value;  // empty -> all zeros
};

struct Solution {
    double theta_star = 0.0;  // reference-state one-step gain at convergence
    std::vector<double> v;    // differential values, canonical order, v[reference] = 0
    ActionTable policy;       // greedy policy of the converged values, ties -> idle
    long iterations = 0;
    double span_residual = 0.0;
    bool converged = false;
};

/// Relative value iteration for the average-age problem:
///   W(s) = delta(s) + min_a sum_s' Pr[s'|s,a] V(s'),
/// renormalized by the reference state each sweep, stopping when the span
/// of W - V drops below epsilon. theta_star is the reference-state gain;
/// at convergence |theta_star + V(s) - W(s)| < epsilon for every state.
Solution relative_value_iteration(const SystemParams& params, const SolverOptions& opts = {});

/// Greedy action per state from a converged value table: transmit iff the
/// transmit branch strictly lowers the expected continuation value
/// (dV(s) = V1(s) - V0(s) < 0). Ties, including every e = 0 state, idle.
ActionTable extract_policy(const std::vector<double>& v, const SystemParams& params);

enum class ThresholdRule {
    DeltaMonotone,     // transmit at delta must imply transmit at larger delta
    EnergyMonotone,    // transmit at e must imply transmit at larger e
    EmptyBatteryIdle,  // no transmission at e = 0
    ZeroViaIdle,       // no transmission at delta = 0
};
const char* to_string(ThresholdRule rule);

struct ThresholdViolation {
    State state;
    ThresholdRule rule;
};

struct ThresholdReport {
    // thresholds[e][x]: smallest delta with action 1, or nullopt if the
    // policy never transmits at that (e, x).
    std::vector<std::array<std::optional<int>, 2>> thresholds;
    std::vector<ThresholdViolation> violations;
    bool empty_battery_idle = true;
    bool zero_via_idle = true;

    bool is_threshold() const { return violations.empty(); }
};

ThresholdReport threshold_report(const ActionTable& policy, const SystemParams& params);

struct DeltaVProfile {
    std::vector<double> dv;  // V1 - V0 per state, canonical order
    // violations: states (e,x,delta) with dv(e,x,delta+1) > dv(e,x,delta) + tol,
    // delta in [1, delta_max-1].
    std::vector<State> violations;
    std::vector<std::array<bool, 2>> nonincreasing;  // per (e, x)
};

/// Transmit-minus-idle continuation values through the kernel, with a
/// nonincreasing-in-delta check over delta >= 1 (the last step up to
/// delta_max is held to the same tolerance, not strictness).
DeltaVProfile delta_v_profile(const std::vector<double>& v, const SystemParams& params,
                              double tol = 1e-9);

}  // namespace viamdp
