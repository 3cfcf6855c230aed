#include "viamdp/policies.hpp"

#include <stdexcept>

namespace viamdp {

ActionTable make_action_table(const SystemParams& params) {
    ActionTable table;
    table.e_max = params.e_max;
    table.delta_max = params.delta_max;
    table.action.assign(state_count(params), 0);
    return table;
}

double action_distribution(const Policy& policy, const State& s) {
    if (s.e == 0) return 0.0;
    struct Visitor {
        const State& s;
        double operator()(const ActionTable& t) const { return t.at(s) ? 1.0 : 0.0; }
        double operator()(const RandomizedStationary& rs) const { return rs.p_alpha; }
        double operator()(const Greedy&) const { return 1.0; }
    };
    return std::visit(Visitor{s}, policy);
}

Action decide(const Policy& policy, const State& s, double u) {
    return u < action_distribution(policy, s) ? 1 : 0;
}

ActionTable deterministic_table(const Policy& policy, const SystemParams& params) {
    ActionTable table = make_action_table(params);
    for (const State& s : enumerate_states(params)) {
        const double prob = action_distribution(policy, s);
        if (prob != 0.0 && prob != 1.0)
            throw std::invalid_argument("deterministic_table: policy is stochastic");
        table.action[table.index(s)] = prob == 1.0 ? 1 : 0;
    }
    return table;
}

}  // namespace viamdp
