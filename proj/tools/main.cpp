#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "viamdp/experiment.hpp"
#include "viamdp/format.hpp"

namespace {

struct Overrides {
    std::optional<double> p, q, beta, p_s, p_alpha;
    std::optional<int> e_max, delta_max, jobs;
    std::optional<long> horizon, burn_in, max_iters;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon, damping;
    std::optional<std::string> out_dir;
    std::vector<std::string> policies;
};

void apply(const Overrides& ov, viamdp::ExperimentConfig& config) {
    if (ov.p) config.params.p = *ov.p;
    if (ov.q) config.params.q = *ov.q;
    if (ov.beta) config.params.beta = *ov.beta;
    if (ov.p_s) config.params.p_s = *ov.p_s;
    if (ov.p_alpha) config.params.p_alpha = *ov.p_alpha;
    if (ov.e_max) config.params.e_max = *ov.e_max;
    if (ov.delta_max) config.params.delta_max = *ov.delta_max;
    if (ov.seed) config.sim.seed = *ov.seed;
    if (ov.horizon) config.sim.horizon = *ov.horizon;
    if (ov.burn_in) config.sim.burn_in = *ov.burn_in;
    if (ov.epsilon) config.solver.epsilon = *ov.epsilon;
    if (ov.max_iters) config.solver.max_iters = *ov.max_iters;
    if (ov.damping) config.solver.damping = *ov.damping;
    if (ov.jobs) config.jobs = *ov.jobs;
    if (ov.out_dir) config.out_dir = *ov.out_dir;
    if (!ov.policies.empty()) config.policies = ov.policies;
    viamdp::validate_params(config.params);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average-age transmission policy solver and simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    Overrides ov;
    app.add_option("--config", config_path, "JSON experiment config file");
    app.add_option("--out", ov.out_dir, "output directory");
    app.add_option("--seed", ov.seed, "simulation seed");
    app.add_option("--horizon", ov.horizon, "simulation horizon in slots");
    app.add_option("--burn-in", ov.burn_in, "slots excluded from simulation averages");
    app.add_option("--jobs", ov.jobs, "parallel sweep workers");
    app.add_option("--epsilon", ov.epsilon, "solver span tolerance");
    app.add_option("--max-iters", ov.max_iters, "solver iteration cap");
    app.add_option("--damping", ov.damping, "solver aperiodicity weight in (0,1]");
    app.add_option("--p", ov.p, "source flip probability 0 -> 1");
    app.add_option("--q", ov.q, "source flip probability 1 -> 0");
    app.add_option("--beta", ov.beta, "energy arrival probability");
    app.add_option("--p-s", ov.p_s, "channel success probability");
    app.add_option("--p-alpha", ov.p_alpha, "randomized policy transmit probability");
    app.add_option("--e-max", ov.e_max, "battery capacity");
    app.add_option("--delta-max", ov.delta_max, "age cap");
    app.add_option("--policies", ov.policies, "policies to run (optimal, rs, greedy)")
        ->delimiter(',');

    auto* solve = app.add_subcommand("solve", "solve one instance, write the policy grid");
    auto* sweep = app.add_subcommand("sweep", "evaluate policies across the sweep grid");
    auto* verify = app.add_subcommand("verify", "run structural and consistency checks");
    auto* sim = app.add_subcommand("simulate", "Monte Carlo run per policy");
    auto* tr = app.add_subcommand("trace", "write per-slot trace files");

    CLI11_PARSE(app, argc, argv);

    try {
        viamdp::ExperimentConfig config =
            config_path.empty() ? viamdp::ExperimentConfig{} : viamdp::load_config(config_path);
        apply(ov, config);

        if (solve->parsed()) {
            const viamdp::Solution sol = viamdp::run_solve(config);
            std::cout << "theta_rvi=" << viamdp::format_double(sol.theta_star)
                      << " iterations=" << sol.iterations
                      << " span_residual=" << viamdp::format_double(sol.span_residual) << '\n';
            if (!sol.converged) {
                std::cerr << "solver did not converge within " << config.solver.max_iters
                          << " iterations (span " << viamdp::format_double(sol.span_residual)
                          << ")\n";
                return 1;
            }
            return 0;
        }
        if (sweep->parsed()) {
            const int failed = viamdp::run_sweep(config);
            if (failed > 0) {
                std::cerr << failed << " sweep row(s) failed, see the error column\n";
                return 1;
            }
            return 0;
        }
        if (verify->parsed()) {
            const viamdp::VerifyReport report = viamdp::run_verify(config);
            for (const viamdp::VerifyCheck& check : report.checks) {
                std::cout << check.name << ": " << check.status
                          << " (residual " << viamdp::format_double(check.residual) << ')';
                if (!check.detail.empty()) std::cout << " " << check.detail;
                std::cout << '\n';
            }
            return report.all_passed() ? 0 : 1;
        }
        if (sim->parsed()) {
            for (const auto& [name, stats] : viamdp::run_simulate(config))
                std::cout << name << ": avg_via=" << viamdp::format_double(stats.avg_via)
                          << " avg_energy=" << viamdp::format_double(stats.avg_energy)
                          << " std_err=" << viamdp::format_double(stats.via_std_error)
                          << " slots=" << stats.slot_count << '\n';
            return 0;
        }
        if (tr->parsed()) {
            viamdp::run_trace(config);
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
