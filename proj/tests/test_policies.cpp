#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "viamdp/policies.hpp"
#include "viamdp/rng.hpp"

using namespace viamdp;

namespace {

SystemParams small_params() {
    SystemParams p;
    p.p = 0.4;
    p.q = 0.7;
    p.beta = 0.2;
    p.p_s = 0.5;
    p.e_max = 3;
    p.delta_max = 4;
    return p;
}

}  // namespace

TEST_CASE("action_distribution per variant") {
    const SystemParams params = small_params();

    CHECK(action_distribution(Greedy{}, State{3, 1, 0}) == 1.0);
    CHECK(action_distribution(RandomizedStationary{0.5}, State{0, 0, 4}) == 0.0);
    CHECK(action_distribution(RandomizedStationary{0.5}, State{2, 0, 4}) == 0.5);

    ActionTable table = make_action_table(params);
    table.action[table.index(State{2, 1, 3})] = 1;
    CHECK(action_distribution(table, State{2, 1, 3}) == 1.0);
    CHECK(action_distribution(table, State{2, 1, 2}) == 0.0);

    SUBCASE("no variant transmits on an empty battery") {
        ActionTable bogus = make_action_table(params);
        for (auto& a : bogus.action) a = 1;  // even a corrupt table is masked
        for (const Policy& policy :
             {Policy{bogus}, Policy{RandomizedStationary{1.0}}, Policy{Greedy{}}})
            for (const State& s : enumerate_states(params))
                if (s.e == 0) CHECK(action_distribution(policy, s) == 0.0);
    }
}

TEST_CASE("decide thresholds the uniform draw") {
    CHECK(decide(Greedy{}, State{3, 1, 0}, 0.99) == 1);
    CHECK(decide(RandomizedStationary{0.5}, State{2, 0, 4}, 0.49) == 1);
    CHECK(decide(RandomizedStationary{0.5}, State{2, 0, 4}, 0.5) == 0);

    ActionTable table = make_action_table(small_params());
    table.action[table.index(State{1, 0, 2})] = 1;
    for (double u : {0.0, 0.3, 0.999}) {
        CHECK(decide(table, State{1, 0, 2}, u) == 1);  // u ignored for tables
        CHECK(decide(table, State{1, 0, 1}, u) == 0);
    }
}

TEST_CASE("empirical transmit frequency matches the declared probability") {
    const RandomizedStationary rs{0.3};
    const State s{2, 0, 4};
    UniformStream stream(424242);
    const int n = 100'000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += decide(rs, s, stream.next());
    const double freq = static_cast<double>(hits) / n;
    const double se = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(freq - 0.3) <= 3.0 * se);
}

TEST_CASE("deterministic_table") {
    const SystemParams params = small_params();

    const ActionTable greedy = deterministic_table(Greedy{}, params);
    for (const State& s : enumerate_states(params))
        CHECK(greedy.at(s) == (s.e > 0 ? 1 : 0));

    CHECK(deterministic_table(RandomizedStationary{1.0}, params).action == greedy.action);
    const ActionTable never = deterministic_table(RandomizedStationary{0.0}, params);
    CHECK(never.action == make_action_table(params).action);

    CHECK_THROWS_AS(deterministic_table(RandomizedStationary{0.5}, params),
                    std::invalid_argument);
}
