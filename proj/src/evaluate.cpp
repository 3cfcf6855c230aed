#include "viamdp/evaluate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace viamdp {

InducedChain induced_chain(const Policy& policy, const SystemParams& params) {
    InducedChain chain;
    chain.n = state_count(params);
    chain.rows.resize(chain.n);
    chain.transmit_prob.resize(chain.n);
    for (const State& s : enumerate_states(params)) {
        const int i = state_index(params, s);
        const double prob = action_distribution(policy, s);
        chain.transmit_prob[i] = prob;
        TransitionRow mixed;
        if (prob < 1.0)
            for (const auto& [succ, pr] : transition_kernel(s, 0, params).entries)
                mixed.add(succ, (1.0 - prob) * pr);
        if (prob > 0.0)
            for (const auto& [succ, pr] : transition_kernel(s, 1, params).entries)
                mixed.add(succ, prob * pr);
        chain.rows[i].reserve(mixed.entries.size());
        for (const auto& [succ, pr] : mixed.entries)
            chain.rows[i].emplace_back(state_index(params, succ), pr);
    }
    return chain;
}

const char* to_string(EvalMethod m) {
    return m == EvalMethod::StationarySolve ? "stationary-solve" : "propagation";
}

namespace {

std::vector<double> propagate(const InducedChain& chain) {
    std::vector<double> pi(chain.n, 0.0);
    std::vector<double> next(chain.n, 0.0);
    pi[0] = 1.0;  // point mass at (0,0,0)
    constexpr std::int64_t max_steps = 10'000'000;
    for (std::int64_t step = 0; step < max_steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < chain.n; ++i) {
            if (pi[i] == 0.0) continue;
            for (const auto& [j, p] : chain.rows[i]) next[j] += pi[i] * p;
        }
        double tv = 0.0;
        for (int i = 0; i < chain.n; ++i) tv += std::abs(next[i] - pi[i]);
        pi.swap(next);
        if (0.5 * tv < 1e-12) return pi;
    }
    throw std::runtime_error(
        "stationary_distribution: propagation fallback did not settle within 1e7 steps");
}

}  // namespace

StationaryDistribution stationary_distribution(const InducedChain& chain) {
    const int n = chain.n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, p] : chain.rows[i]) a(j, i) += p;
    a.diagonal().array() -= 1.0;
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
        const Eigen::VectorXd pi = lu.solve(b);
        if (pi.minCoeff() >= -1e-9) {
            std::vector<double> pushed(n, 0.0);
            for (int i = 0; i < n; ++i)
                for (const auto& [j, p] : chain.rows[i]) pushed[j] += pi(i) * p;
            double residual = 0.0;
            for (int i = 0; i < n; ++i)
                residual = std::max(residual, std::abs(pushed[i] - pi(i)));
            if (residual < 1e-9) {
                std::vector<double> out(n);
                double sum = 0.0;
                for (int i = 0; i < n; ++i) {
                    out[i] = std::max(pi(i), 0.0);
                    sum += out[i];
                }
                for (double& v : out) v /= sum;
                return {std::move(out), EvalMethod::StationarySolve};
            }
        }
    }
    // Singular or unreliable solve: the policy may induce a multichain.
    return {propagate(chain), EvalMethod::Propagation};
}

ExactMetrics exact_metrics(const Policy& policy, const SystemParams& params) {
    const InducedChain chain = induced_chain(policy, params);
    const StationaryDistribution dist = stationary_distribution(chain);
    ExactMetrics metrics;
    metrics.method = dist.method;
    for (const State& s : enumerate_states(params)) {
        const int i = state_index(params, s);
        metrics.avg_via += dist.pi[i] * s.delta;
        metrics.avg_energy += dist.pi[i] * chain.transmit_prob[i];
    }
    return metrics;
}

BruteForceResult brute_force_optimal(const SystemParams& params) {
    if (state_count(params) > 14)
        throw std::invalid_argument("brute_force_optimal: instance has more than 14 states");

    // Both actions coincide at e=0, so only nonempty-battery states vary.
    std::vector<int> free_states;
    for (const State& s : enumerate_states(params))
        if (s.e > 0) free_states.push_back(state_index(params, s));

    BruteForceResult best;
    best.theta = std::numeric_limits<double>::infinity();
    const std::uint32_t combos = 1u << free_states.size();
    for (std::uint32_t mask = 0; mask < combos; ++mask) {
        ActionTable table = make_action_table(params);
        for (std::size_t k = 0; k < free_states.size(); ++k)
            if (mask >> k & 1u) table.action[free_states[k]] = 1;
        const ExactMetrics metrics = exact_metrics(table, params);
        if (metrics.avg_via < best.theta) {
            best.theta = metrics.avg_via;
            best.policy = std::move(table);
        }
    }
    return best;
}

}  // namespace viamdp
