#pragma once

#include <utility>
#include <vector>

#include "viamdp/model.hpp"
#include "viamdp/policies.hpp"

namespace viamdp {

/// Markov chain induced by a stationary policy: policy-averaged kernel rows
/// (sparse, canonical indices) plus the per-state transmit indicator
/// Pr[a = 1 | s] * 1{e > 0}.
struct InducedChain {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<double> transmit_prob;
};

InducedChain induced_chain(const Policy& policy, const SystemParams& params);

enum class EvalMethod { StationarySolve, Propagation };
const char* to_string(EvalMethod m);

struct StationaryDistribution {
    std::vector<double> pi;
    EvalMethod method = EvalMethod::StationarySolve;
};

/// Solves pi P = pi, sum(pi) = 1 directly; on a singular or unreliable
/// solve (multichain policy) falls back to forward propagation from a
/// point mass at (0,0,0) until successive distributions differ by less
/// than 1e-12 in total variation. Throws std::runtime_error if the
/// fallback has not settled after 1e7 steps.
StationaryDistribution stationary_distribution(const InducedChain& chain);

struct ExactMetrics {
    double avg_via = 0.0;
    double avg_energy = 0.0;
    EvalMethod method = EvalMethod::StationarySolve;
};

/// Long-run averages of the age and the energy spent per slot under a
/// stationary policy, from the stationary distribution of its chain.
ExactMetrics exact_metrics(const Policy& policy, const SystemParams& params);

struct BruteForceResult {
    double theta = 0.0;
    ActionTable policy;
};

/// Exhaustive search over all deterministic stationary policies that idle
/// on an empty battery (the kernel makes both actions identical there).
/// Only defined for instances with at most 14 states.
BruteForceResult brute_force_optimal(const SystemParams& params);

}  // namespace viamdp
