#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "viamdp/model.hpp"
#include "viamdp/policies.hpp"

namespace viamdp {

struct SimConfig {
    long horizon = 1'000'000;
    std::uint64_t seed = 1;
    long burn_in = 10'000;  // slots excluded from the averages
    bool record_trace = false;
};

struct SimStats {
    double avg_via = 0.0;
    double avg_energy = 0.0;
    double via_std_error = 0.0;  // batch means, 100 batches
    long slot_count = 0;         // slots contributing to the averages
    std::uint64_t seed = 0;
};

struct TraceRow {
    long t = 0;
    int e = 0;
    int x = 0;
    int delta = 0;
    int action = 0;
    std::optional<int> channel;  // present only when a transmission occurred
    int arrival = 0;
};

/// Closed-loop Monte Carlo run. Per slot, in this order (part of the
/// external contract; reordering breaks seed reproducibility):
///   1. observe s = (e, x, delta);
///   2. pick the action (one uniform draw iff the policy's transmit
///      probability is strictly between 0 and 1), coerced to idle at e = 0;
///   3. if transmitting, draw the channel outcome (no draw when p_s is 0 or 1);
///   4. draw the source transition;
///   5. draw the energy arrival;
///   6. advance battery and age; 7. accumulate delta and the energy spent.
/// The stream starts with one draw for X_1 from the source stationary
/// distribution (inverse CDF over states 0, 1); e_1 = 0 and delta_1 = 0.
SimStats simulate(const Policy& policy, const SystemParams& params, const SimConfig& config);

/// Same trajectory as simulate() for identical inputs, returned as per-slot
/// records. Requires config.record_trace and horizon <= 1e5.
std::vector<TraceRow> trace(const Policy& policy, const SystemParams& params,
                            const SimConfig& config);

}  // namespace viamdp
