#include "viamdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace viamdp {

void TransitionRow::add(const State& s, double prob) {
    if (prob <= 0.0) return;
    for (auto& [succ, p] : entries) {
        if (succ == s) {
            p += prob;
            return;
        }
    }
    entries.emplace_back(s, prob);
}

double TransitionRow::total() const {
    double sum = 0.0;
    for (const auto& [succ, p] : entries) sum += p;
    return sum;
}

int state_count(const SystemParams& params) {
    return (params.e_max + 1) * 2 * (params.delta_max + 1);
}

int state_index(const SystemParams& params, const State& s) {
    return (s.e * 2 + s.x) * (params.delta_max + 1) + s.delta;
}

State state_at(const SystemParams& params, int index) {
    const int d = index % (params.delta_max + 1);
    index /= params.delta_max + 1;
    return State{index / 2, index % 2, d};
}

bool in_bounds(const SystemParams& params, const State& s) {
    return s.e >= 0 && s.e <= params.e_max && (s.x == 0 || s.x == 1) && s.delta >= 0 &&
           s.delta <= params.delta_max;
}

std::vector<State> enumerate_states(const SystemParams& params) {
    std::vector<State> states;
    states.reserve(state_count(params));
    for (int e = 0; e <= params.e_max; ++e)
        for (int x = 0; x <= 1; ++x)
            for (int d = 0; d <= params.delta_max; ++d) states.push_back(State{e, x, d});
    return states;
}

double source_transition_prob(int x, int x_next, const SystemParams& params) {
    if (x == 0) return x_next == 0 ? 1.0 - params.p : params.p;
    return x_next == 0 ? params.q : 1.0 - params.q;
}

int via_step(int delta, bool source_changed, Action a, bool h, const SystemParams& params) {
    const bool delivered = (a == 1) && h;
    if (delivered) return source_changed ? 1 : 0;
    if (source_changed) return std::min(delta + 1, params.delta_max);
    return delta;
}

int battery_step(int e, int b, Action a, const SystemParams& params) {
    if (a == 1 && e == 0)
        throw std::invalid_argument("battery_step: transmission from an empty battery");
    return std::min(e + b - a, params.e_max);
}

TransitionRow transition_kernel(const State& s, Action a, const SystemParams& params) {
    // An empty battery forces idle dynamics regardless of the action.
    const bool transmit = (a == 1) && s.e > 0;
    const double flip = s.x == 0 ? params.p : params.q;

    TransitionRow row;
    for (int b = 0; b <= 1; ++b) {
        const double pb = b ? params.beta : 1.0 - params.beta;
        for (int changed = 0; changed <= 1; ++changed) {
            const double pc = changed ? flip : 1.0 - flip;
            const int x_next = changed ? 1 - s.x : s.x;
            if (!transmit) {
                const int e_next = std::min(s.e + b, params.e_max);
                const int d_next = changed ? std::min(s.delta + 1, params.delta_max) : s.delta;
                row.add(State{e_next, x_next, d_next}, pb * pc);
                continue;
            }
            const int e_next = std::min(s.e + b - 1, params.e_max);
            if (s.delta == 0) {
                // The channel outcome cannot move delta off 0/1 here, so the
                // success and failure branches collapse into one entry.
                row.add(State{e_next, x_next, changed ? 1 : 0}, pb * pc);
            } else {
                row.add(State{e_next, x_next, changed ? 1 : 0}, pb * pc * params.p_s);
                const int d_fail = changed ? std::min(s.delta + 1, params.delta_max) : s.delta;
                row.add(State{e_next, x_next, d_fail}, pb * pc * (1.0 - params.p_s));
            }
        }
    }
    return row;
}

namespace {

std::string describe(const State& s, Action a) {
    std::ostringstream os;
    os << "(e=" << s.e << ",x=" << s.x << ",delta=" << s.delta << "),a=" << a;
    return os.str();
}

}  // namespace

KernelReport validate_kernel(const SystemParams& params) {
    KernelReport report;
    for (const State& s : enumerate_states(params)) {
        TransitionRow rows[2] = {transition_kernel(s, 0, params), transition_kernel(s, 1, params)};
        for (Action a = 0; a <= 1; ++a) {
            const auto& row = rows[a];
            ++report.rows_checked;
            if (std::abs(row.total() - 1.0) > 1e-12)
                report.violations.push_back("row sum off by " +
                                            std::to_string(row.total() - 1.0) + " at " +
                                            describe(s, a));
            if (row.entries.size() > 8)
                report.violations.push_back("more than 8 entries at " + describe(s, a));
            for (std::size_t i = 0; i < row.entries.size(); ++i) {
                const auto& [succ, p] = row.entries[i];
                if (p <= 0.0)
                    report.violations.push_back("nonpositive probability at " + describe(s, a));
                if (!in_bounds(params, succ))
                    report.violations.push_back("out-of-bounds successor at " + describe(s, a));
                for (std::size_t j = i + 1; j < row.entries.size(); ++j)
                    if (row.entries[j].first == succ)
                        report.violations.push_back("duplicate successor at " + describe(s, a));
            }
        }
        if (s.e == 0 && rows[0].entries != rows[1].entries)
            report.violations.push_back("empty-battery rows differ between actions at " +
                                        describe(s, 1));
    }
    return report;
}

}  // namespace viamdp
