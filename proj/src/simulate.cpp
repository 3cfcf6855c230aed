#include "viamdp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "viamdp/rng.hpp"

namespace viamdp {

namespace {

// One uniform per genuinely stochastic event; none when prob is 0 or 1.
bool draw(UniformStream& stream, double prob) {
    if (prob <= 0.0) return false;
    if (prob >= 1.0) return true;
    return stream.next() < prob;
}

struct RunResult {
    SimStats stats;
    std::vector<TraceRow> rows;
};

RunResult run(const Policy& policy, const SystemParams& params, const SimConfig& config,
              bool keep_trace) {
    validate_params(params);
    if (config.horizon < 1) throw std::invalid_argument("simulate: horizon must be at least 1");
    if (config.burn_in < 0 || config.burn_in >= config.horizon)
        throw std::invalid_argument("simulate: burn_in must lie in [0, horizon)");

    UniformStream stream(config.seed);

    int e = 0;
    int delta = 0;
    int x = stream.next() < params.q / (params.p + params.q) ? 0 : 1;

    const long slots = config.horizon - config.burn_in;
    const long batch_count = std::min<long>(100, slots);
    const long batch_size = slots / batch_count;
    const long batched = batch_count * batch_size;  // leftover slots skip the SE only

    double via_sum = 0.0;
    double energy_sum = 0.0;
    std::vector<double> batch_means;
    batch_means.reserve(batch_count);
    double batch_sum = 0.0;

    RunResult result;
    if (keep_trace) result.rows.reserve(config.horizon);

    for (long t = 1; t <= config.horizon; ++t) {
        const State s{e, x, delta};
        const double tx_prob = action_distribution(policy, s);
        Action a = 0;
        if (tx_prob >= 1.0)
            a = 1;
        else if (tx_prob > 0.0)
            a = decide(policy, s, stream.next());

        std::optional<int> channel;
        if (a == 1) channel = draw(stream, params.p_s) ? 1 : 0;

        const bool changed = draw(stream, x == 0 ? params.p : params.q);
        const int arrival = draw(stream, params.beta) ? 1 : 0;

        if (keep_trace) result.rows.push_back({t, e, x, delta, a, channel, arrival});

        if (t > config.burn_in) {
            via_sum += delta;
            energy_sum += a;
            const long w = t - config.burn_in;
            if (w <= batched) {
                batch_sum += delta;
                if (w % batch_size == 0) {
                    batch_means.push_back(batch_sum / batch_size);
                    batch_sum = 0.0;
                }
            }
        }

        const int delta_next = via_step(delta, changed, a, channel.value_or(0) == 1, params);
        e = battery_step(e, arrival, a, params);
        delta = delta_next;
        if (changed) x = 1 - x;
    }

    result.stats.avg_via = via_sum / static_cast<double>(slots);
    result.stats.avg_energy = energy_sum / static_cast<double>(slots);
    result.stats.slot_count = slots;
    result.stats.seed = config.seed;

    const auto b = static_cast<long>(batch_means.size());
    if (b >= 2) {
        double mean = 0.0;
        for (double m : batch_means) mean += m;
        mean /= static_cast<double>(b);
        double ss = 0.0;
        for (double m : batch_means) ss += (m - mean) * (m - mean);
        result.stats.via_std_error = std::sqrt(ss / static_cast<double>(b - 1) /
                                               static_cast<double>(b));
    }
    return result;
}

}  // namespace

SimStats simulate(const Policy& policy, const SystemParams& params, const SimConfig& config) {
    return run(policy, params, config, false).stats;
}

std::vector<TraceRow> trace(const Policy& policy, const SystemParams& params,
                            const SimConfig& config) {
    if (!config.record_trace) throw std::invalid_argument("trace: record_trace not set");
    if (config.horizon > 100'000)
        throw std::invalid_argument("trace: horizon above the 1e5 recording guard");
    return run(policy, params, config, true).rows;
}

}  // namespace viamdp
