// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "viamdp/evaluate.hpp"
#include "viamdp/format.hpp"
#include "viamdp/rng.hpp"
#include "viamdp/simulate.hpp"
#include "viamdp/solver.hpp"

using namespace viamdp;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s (%s)\n", id, pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

SystemParams make_params(double p, double q, double beta, double p_s, int e_max = 10,
                         int delta_max = 10) {
    SystemParams params;
    params.p = p;
    params.q = q;
    params.beta = beta;
    params.p_s = p_s;
    params.e_max = e_max;
    params.delta_max = delta_max;
    return params;
}

struct GridPoint {
    SystemParams params;
    Solution sol;
    ExactMetrics opt, rs, greedy;
    ThresholdReport thresholds;
    DeltaVProfile profile;
};

constexpr std::pair<double, double> kSourcePairs[] = {{0.4, 0.7}, {0.7, 0.4}, {0.5, 0.6}};
constexpr double kBetas[] = {0.2, 0.4, 0.5, 0.8};
constexpr double kChannels[] = {0.1, 0.5, 0.9};

std::vector<GridPoint> solve_grid() {
    std::vector<GridPoint> grid;
    for (const auto& [p, q] : kSourcePairs)
        for (double beta : kBetas)
            for (double p_s : kChannels) {
                GridPoint point;
                point.params = make_params(p, q, beta, p_s);
                point.sol = relative_value_iteration(point.params);
                point.opt = exact_metrics(Policy{point.sol.policy}, point.params);
                point.rs = exact_metrics(RandomizedStationary{0.5}, point.params);
                point.greedy = exact_metrics(Greedy{}, point.params);
                point.thresholds = threshold_report(point.sol.policy, point.params);
                point.profile = delta_v_profile(point.sol.v, point.params);
                grid.push_back(std::move(point));
            }
    return grid;
}

const GridPoint& at(const std::vector<GridPoint>& grid, double p, double q, double beta,
                    double p_s) {
    for (const GridPoint& point : grid)
        if (point.params.p == p && point.params.q == q && point.params.beta == beta &&
            point.params.p_s == p_s)
            return point;
    std::abort();
}

int threshold_or_cap(const std::optional<int>& th, int delta_max) {
    return th ? *th : delta_max + 1;
}

void criterion_1() {
    const double vals[] = {0.1, 0.5, 0.9};
    long violations = 0;
    int rows = 0;
    for (double p : vals)
        for (double q : vals)
            for (double beta : vals)
                for (double p_s : vals) {
                    const KernelReport r = validate_kernel(make_params(p, q, beta, p_s));
                    violations += static_cast<long>(r.violations.size());
                    rows += r.rows_checked;
                }
    report(1, "kernel validity across the probability grid", violations == 0,
           std::to_string(rows) + " rows checked, " + std::to_string(violations) + " violations");
}

void criterion_2() {
    UniformStream stream(7);
    auto draw = [&] { return 0.05 + 0.9 * stream.next(); };
    double worst = 0.0;
    bool all_converged = true;
    for (int k = 0; k < 20; ++k) {
        const SystemParams params = make_params(draw(), draw(), draw(), draw(), 1, 2);
        const Solution sol = relative_value_iteration(params);
        all_converged = all_converged && sol.converged;
        worst = std::max(worst, std::abs(sol.theta_star - brute_force_optimal(params).theta));
    }
    report(2, "solver gain matches exhaustive search on 20 random tiny instances",
           all_converged && worst < 1e-6, "worst gap " + format_double(worst));
}

void criterion_3(const std::vector<GridPoint>& grid) {
    double worst = 0.0;
    bool all_converged = true;
    for (const GridPoint& point : grid) {
        all_converged = all_converged && point.sol.converged;
        worst = std::max(worst, std::abs(point.sol.theta_star - point.opt.avg_via));
    }
    report(3, "gain equals the exact value of the extracted policy on the sweep grid",
           all_converged && worst < 1e-6, "worst gap " + format_double(worst));
}

void criterion_4(const std::vector<GridPoint>& grid) {
    long violations = 0;
    bool idle_rules = true;
    for (const GridPoint& point : grid) {
        violations += static_cast<long>(point.thresholds.violations.size());
        idle_rules = idle_rules && point.thresholds.empty_battery_idle &&
                     point.thresholds.zero_via_idle;
    }
    report(4, "optimal policies are threshold-form with the idle rules", violations == 0 && idle_rules,
           std::to_string(violations) + " violations over " + std::to_string(grid.size()) +
               " instances");
}

void criterion_5(const std::vector<GridPoint>& grid) {
    int breaches = 0;
    for (double beta : {0.2, 0.4}) {
        const ThresholdReport& fwd = at(grid, 0.4, 0.7, beta, 0.5).thresholds;
        const ThresholdReport& rev = at(grid, 0.7, 0.4, beta, 0.5).thresholds;
        for (int e = 1; e <= 10; ++e) {
            if (fwd.thresholds[e][0] && fwd.thresholds[e][1] &&
                *fwd.thresholds[e][0] > *fwd.thresholds[e][1])
                ++breaches;
            if (rev.thresholds[e][0] && rev.thresholds[e][1] &&
                *rev.thresholds[e][1] > *rev.thresholds[e][0])
                ++breaches;
        }
    }
    report(5, "slower source state gets the lower transmission threshold", breaches == 0,
           std::to_string(breaches) + " orderings breached");
}

void criterion_6(const std::vector<GridPoint>& grid) {
    const ThresholdReport& lean = at(grid, 0.4, 0.7, 0.2, 0.5).thresholds;
    const ThresholdReport& rich = at(grid, 0.4, 0.7, 0.4, 0.5).thresholds;
    int breaches = 0;
    for (int e = 0; e <= 10; ++e)
        for (int x = 0; x <= 1; ++x)
            if (threshold_or_cap(rich.thresholds[e][x], 10) >
                threshold_or_cap(lean.thresholds[e][x], 10))
                ++breaches;
    report(6, "more harvesting never raises a threshold", breaches == 0,
           std::to_string(breaches) + " of 22 threshold cells breached");
}

void criterion_7(const std::vector<GridPoint>& grid) {
    double worst = -1e300;
    for (const GridPoint& point : grid)
        worst = std::max({worst, point.opt.avg_via - point.rs.avg_via,
                          point.opt.avg_via - point.greedy.avg_via});
    report(7, "optimal average age dominates both baselines", worst <= 1e-9,
           "worst optimal-minus-baseline " + format_double(worst));
}

void criterion_8(const std::vector<GridPoint>& grid) {
    double greedy_gap = 0.0;
    double rs_excess = -1e300;
    for (const GridPoint& point : grid) {
        greedy_gap = std::max(greedy_gap,
                              std::abs(point.greedy.avg_energy - point.params.beta));
        rs_excess = std::max(rs_excess, point.rs.avg_energy -
                                            std::min(0.5, point.params.beta));
    }
    report(8, "greedy spends beta, randomized spends at most min(0.5, beta)",
           greedy_gap < 1e-9 && rs_excess <= 1e-9,
           "greedy gap " + format_double(greedy_gap) + ", rs excess " +
               format_double(rs_excess));
}

double optimal_avg_via(const SystemParams& params) {
    const Solution sol = relative_value_iteration(params);
    return exact_metrics(Policy{sol.policy}, params).avg_via;
}

void criterion_9() {
    int breaches = 0;
    double prev = -1e300;
    for (int i = 1; i <= 9; ++i) {
        const double via = optimal_avg_via(make_params(0.1 * i, 0.6, 0.5, 0.5));
        if (via < prev - 1e-9) ++breaches;
        prev = via;
    }
    for (double p_s : {0.1, 0.9}) {
        prev = 1e300;
        for (int i = 1; i <= 9; ++i) {
            const double via = optimal_avg_via(make_params(0.5, 0.6, 0.1 * i, p_s));
            if (via > prev + 1e-9) ++breaches;
            prev = via;
        }
    }
    report(9, "average age rises with source speed and falls with harvest rate", breaches == 0,
           std::to_string(breaches) + " monotonicity breaches over 27 sweep steps");
}

void criterion_10(const std::vector<GridPoint>& grid) {
    const GridPoint& scarce = at(grid, 0.5, 0.6, 0.2, 0.9);
    const double gap_scarce = scarce.greedy.avg_via - scarce.opt.avg_via;

    const SystemParams rich = make_params(0.5, 0.6, 0.99, 0.9);
    const Solution sol = relative_value_iteration(rich);
    const double gap_rich = exact_metrics(Greedy{}, rich).avg_via -
                            exact_metrics(Policy{sol.policy}, rich).avg_via;
    report(10, "greedy closes on optimal as energy becomes plentiful",
           gap_rich < 0.1 * gap_scarce,
           "gap " + format_double(gap_rich) + " at beta=0.99 vs " + format_double(gap_scarce) +
               " at beta=0.2");
}

void criterion_11(const std::vector<GridPoint>& grid) {
    struct Pick {
        double p, q, beta, p_s;
    };
    const Pick picks[] = {{0.4, 0.7, 0.2, 0.5}, {0.5, 0.6, 0.4, 0.9}, {0.7, 0.4, 0.8, 0.1}};
    SimConfig base;
    base.horizon = 1'000'000;
    base.burn_in = 10'000;

    double worst_via_ratio = 0.0;
    double worst_energy_ratio = 0.0;
    int run = 0;
    for (const Pick& pick : picks) {
        const GridPoint& point = at(grid, pick.p, pick.q, pick.beta, pick.p_s);
        const std::pair<Policy, const ExactMetrics*> cases[] = {
            {Policy{point.sol.policy}, &point.opt},
            {Policy{RandomizedStationary{0.5}}, &point.rs},
            {Policy{Greedy{}}, &point.greedy}};
        for (const auto& [policy, exact] : cases) {
            SimConfig cfg = base;
            cfg.seed = 100 + run++;
            const SimStats stats = simulate(policy, point.params, cfg);
            const double via_tol =
                std::max(0.01 * exact->avg_via, 3.0 * stats.via_std_error);
            worst_via_ratio = std::max(
                worst_via_ratio, std::abs(stats.avg_via - exact->avg_via) / via_tol);
            const double m = exact->avg_energy;
            const double energy_tol = std::max(
                0.01 * m, 3.0 * std::sqrt(m * (1.0 - m) / static_cast<double>(stats.slot_count)));
            worst_energy_ratio = std::max(
                worst_energy_ratio, std::abs(stats.avg_energy - m) / energy_tol);
        }
    }
    report(11, "simulation matches the exact metrics at reference points",
           worst_via_ratio <= 1.0 && worst_energy_ratio <= 1.0,
           "worst gap/tolerance: age " + format_double(worst_via_ratio) + ", energy " +
               format_double(worst_energy_ratio));
}

void criterion_12(const std::vector<GridPoint>& grid) {
    long violations = 0;
    double worst = -1e300;
    for (const GridPoint& point : grid) {
        violations += static_cast<long>(point.profile.violations.size());
        for (int e = 0; e <= 10; ++e)
            for (int x = 0; x <= 1; ++x)
                for (int d = 1; d < 10; ++d)
                    worst = std::max(
                        worst, point.profile.dv[state_index(point.params, State{e, x, d + 1})] -
                                   point.profile.dv[state_index(point.params, State{e, x, d})]);
    }
    report(12, "transmit advantage is monotone in the age", violations == 0,
           std::to_string(violations) + " violations, worst upward step " + format_double(worst));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    const std::vector<GridPoint> grid = solve_grid();
    criterion_3(grid);
    criterion_4(grid);
    criterion_5(grid);
    criterion_6(grid);
    criterion_7(grid);
    criterion_8(grid);
    criterion_9();
    criterion_10(grid);
    criterion_11(grid);
    criterion_12(grid);
    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
