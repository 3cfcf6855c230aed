#include "viamdp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace viamdp {

namespace {

// Kernel rows for both actions rewritten over canonical indices.
struct IndexedKernel {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> rows[2];
};

IndexedKernel index_kernel(const SystemParams& params) {
    IndexedKernel k;
    k.n = state_count(params);
    k.rows[0].resize(k.n);
    k.rows[1].resize(k.n);
    for (const State& s : enumerate_states(params)) {
        const int i = state_index(params, s);
        for (Action a = 0; a <= 1; ++a) {
            const TransitionRow row = transition_kernel(s, a, params);
            k.rows[a][i].reserve(row.entries.size());
            for (const auto& [succ, p] : row.entries)
                k.rows[a][i].emplace_back(state_index(params, succ), p);
        }
    }
    return k;
}

double expected_value(const std::vector<std::pair<int, double>>& row,
                      const std::vector<double>& v) {
    double sum = 0.0;
    for (const auto& [j, p] : row) sum += p * v[j];
    return sum;
}

double expected_value_of(const TransitionRow& row, const std::vector<double>& v,
                         const SystemParams& params) {
    double sum = 0.0;
    for (const auto& [succ, p] : row.entries) sum += p * v[state_index(params, succ)];
    return sum;
}

}  // namespace

Solution relative_value_iteration(const SystemParams& params, const SolverOptions& opts) {
    validate_params(params);
    if (!(opts.epsilon > 0.0))
        throw std::invalid_argument("relative_value_iteration: epsilon must be positive");
    if (!in_bounds(params, opts.reference))
        throw std::invalid_argument("relative_value_iteration: reference state out of bounds");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw std::invalid_argument("relative_value_iteration: damping must lie in (0,1]");

    const IndexedKernel kernel = index_kernel(params);
    const int n = kernel.n;
    const int ref = state_index(params, opts.reference);
    const double tau = opts.damping;

    if (!opts.initial_value.empty() && static_cast<int>(opts.initial_value.size()) != n)
        throw std::invalid_argument("relative_value_iteration: initial value table has wrong size");

    std::vector<double> v = opts.initial_value.empty() ? std::vector<double>(n, 0.0)
                                                       : opts.initial_value;
    const double v_ref = v[ref];
    for (double& x : v) x -= v_ref;

    std::vector<double> delta_cost(n);
    for (const State& s : enumerate_states(params)) delta_cost[state_index(params, s)] = s.delta;

    // Damped sweeps W = delta + (1-tau) V + tau min_a P_a V share the gain
    // and the greedy policy with the undamped operator; scaling the final
    // table by tau recovers a V satisfying the original Bellman equation
    // with residual below the stopping span.
    std::vector<double> w(n);
    Solution sol;
    double span = 0.0;
    for (long it = 1; it <= opts.max_iters; ++it) {
        for (int i = 0; i < n; ++i) {
            const double q0 = expected_value(kernel.rows[0][i], v);
            const double q1 = expected_value(kernel.rows[1][i], v);
            w[i] = delta_cost[i] + (1.0 - tau) * v[i] + tau * std::min(q0, q1);
        }
        double lo = w[0] - v[0];
        double hi = lo;
        for (int i = 1; i < n; ++i) {
            const double d = w[i] - v[i];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        span = hi - lo;
        sol.iterations = it;
        if (span < opts.epsilon) {
            sol.converged = true;
            sol.theta_star = w[ref];  // v[ref] == 0 by normalization
            break;
        }
        const double shift = w[ref];
        for (int i = 0; i < n; ++i) v[i] = w[i] - shift;
    }
    sol.span_residual = span;
    if (!sol.converged) sol.theta_star = w[ref] - v[ref];

    sol.v.resize(n);
    for (int i = 0; i < n; ++i) sol.v[i] = tau * v[i];
    sol.policy = extract_policy(sol.v, params);
    return sol;
}

ActionTable extract_policy(const std::vector<double>& v, const SystemParams& params) {
    if (static_cast<int>(v.size()) != state_count(params))
        throw std::invalid_argument("extract_policy: value table has wrong size");
    ActionTable table = make_action_table(params);
    for (const State& s : enumerate_states(params)) {
        const double q0 = expected_value_of(transition_kernel(s, 0, params), v, params);
        const double q1 = expected_value_of(transition_kernel(s, 1, params), v, params);
        table.action[table.index(s)] = q1 - q0 < 0.0 ? 1 : 0;
    }
    return table;
}

const char* to_string(ThresholdRule rule) {
    switch (rule) {
        case ThresholdRule::DeltaMonotone: return "delta-monotone";
        case ThresholdRule::EnergyMonotone: return "energy-monotone";
        case ThresholdRule::EmptyBatteryIdle: return "empty-battery-idle";
        case ThresholdRule::ZeroViaIdle: return "zero-via-idle";
    }
    return "unknown";
}

ThresholdReport threshold_report(const ActionTable& policy, const SystemParams& params) {
    ThresholdReport report;
    report.thresholds.resize(params.e_max + 1);

    for (int e = 0; e <= params.e_max; ++e) {
        for (int x = 0; x <= 1; ++x) {
            std::optional<int> first;
            bool seen = false;
            for (int d = 0; d <= params.delta_max; ++d) {
                const Action a = policy.at(State{e, x, d});
                if (a == 1 && !first) first = d;
                if (a == 1) seen = true;
                if (a == 0 && seen)
                    report.violations.push_back({State{e, x, d}, ThresholdRule::DeltaMonotone});
                if (a == 1 && e == 0) {
                    report.violations.push_back({State{e, x, d}, ThresholdRule::EmptyBatteryIdle});
                    report.empty_battery_idle = false;
                }
                if (a == 1 && d == 0) {
                    report.violations.push_back({State{e, x, d}, ThresholdRule::ZeroViaIdle});
                    report.zero_via_idle = false;
                }
            }
            report.thresholds[e][x] = first;
        }
    }

    for (int x = 0; x <= 1; ++x)
        for (int d = 0; d <= params.delta_max; ++d) {
            bool seen = false;
            for (int e = 0; e <= params.e_max; ++e) {
                const Action a = policy.at(State{e, x, d});
                if (a == 0 && seen)
                    report.violations.push_back({State{e, x, d}, ThresholdRule::EnergyMonotone});
                if (a == 1) seen = true;
            }
        }

    return report;
}

DeltaVProfile delta_v_profile(const std::vector<double>& v, const SystemParams& params,
                              double tol) {
    if (static_cast<int>(v.size()) != state_count(params))
        throw std::invalid_argument("delta_v_profile: value table has wrong size");
    DeltaVProfile profile;
    profile.dv.resize(state_count(params));
    for (const State& s : enumerate_states(params)) {
        const double q0 = expected_value_of(transition_kernel(s, 0, params), v, params);
        const double q1 = expected_value_of(transition_kernel(s, 1, params), v, params);
        profile.dv[state_index(params, s)] = q1 - q0;
    }
    profile.nonincreasing.assign(params.e_max + 1, {true, true});
    for (int e = 0; e <= params.e_max; ++e)
        for (int x = 0; x <= 1; ++x)
            for (int d = 1; d < params.delta_max; ++d) {
                const double cur = profile.dv[state_index(params, State{e, x, d})];
                const double next = profile.dv[state_index(params, State{e, x, d + 1})];
                if (next > cur + tol) {
                    profile.violations.push_back(State{e, x, d});
                    profile.nonincreasing[e][x] = false;
                }
            }
    return profile;
}

}  // namespace viamdp
