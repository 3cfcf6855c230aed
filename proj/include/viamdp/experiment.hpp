#pragma once

#include <map>
#include <string>
#include <vector>

#include "viamdp/evaluate.hpp"
#include "viamdp/simulate.hpp"
#include "viamdp/solver.hpp"

namespace viamdp {

/// One experiment description: base parameters, optional sweep axes over
/// p/q/beta/p_s, the policies to run ("optimal", "rs", "greedy"), the
/// simulation setup, solver options and output directory.
struct ExperimentConfig {
    SystemParams params;
    std::map<std::string, std::vector<double>> sweep;  // axis name -> values
    std::vector<std::string> policies = {"optimal", "rs", "greedy"};
    SimConfig sim;
    SolverOptions solver;
    std::string out_dir = ".";
    int jobs = 1;
};

/// Parses the JSON config file. Unknown keys are rejected. Missing keys
/// keep their defaults.
ExperimentConfig load_config(const std::string& path);

/// Cross product of the sweep axes applied to the base parameters, axes in
/// fixed order p, q, beta, p_s with the rightmost varying fastest.
std::vector<SystemParams> sweep_combinations(const ExperimentConfig& config);

/// Solves the configured instance, writes policy.csv (header
/// `e,x,delta,action`, canonical row order) and solve_summary.json into
/// out_dir. theta_star in the summary is the exact evaluation of the
/// extracted policy; theta_rvi is the solver gain.
Solution run_solve(const ExperimentConfig& config);

/// Writes metrics.csv: one row per (combination x policy x method) with
/// header `p,q,beta,p_s,policy,method,avg_via,avg_energy,std_err,error`.
/// Exact rows always; sim rows when sim.horizon > 0. Per-row failures land
/// in the error column and the sweep keeps going. Rows are computed
/// concurrently up to `jobs` workers and written in configuration order.
/// Returns the number of failed rows.
int run_sweep(const ExperimentConfig& config);

struct VerifyCheck {
    std::string name;
    std::string status;  // "pass", "fail" or "skipped"
    double residual = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_passed() const;
};

/// Structural and consistency checks on the configured instance: kernel
/// validity, solver convergence and Bellman residual, gain vs exact policy
/// value, reference and initial-value independence, threshold structure,
/// dV monotonicity, brute-force agreement (small instances only) and
/// sim-vs-exact agreement per policy. Writes verify_report.json.
VerifyReport run_verify(const ExperimentConfig& config);

/// Simulates every configured policy once, writes sim.csv in the metrics
/// schema (method "sim").
std::vector<std::pair<std::string, SimStats>> run_simulate(const ExperimentConfig& config);

/// Writes trace_<policy>.csv (header `t,e,x,delta,action,channel,arrival`)
/// for every configured policy; the channel field is empty on idle slots.
void run_trace(const ExperimentConfig& config);

}  // namespace viamdp
