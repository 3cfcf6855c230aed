#include "viamdp/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "json.hpp"

#include "viamdp/format.hpp"
#include "viamdp/rng.hpp"

namespace viamdp {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const char* where,
                  std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
}

std::string sanitize(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return text;
}

std::string describe(const State& s) {
    std::ostringstream os;
    os << "(e=" << s.e << ",x=" << s.x << ",delta=" << s.delta << ")";
    return os.str();
}

std::filesystem::path out_path(const ExperimentConfig& config, const std::string& name) {
    std::filesystem::path dir = config.out_dir.empty() ? "." : config.out_dir;
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

Policy make_policy(const std::string& name, const SystemParams& params,
                   const SolverOptions& solver) {
    if (name == "optimal") {
        Solution sol = relative_value_iteration(params, solver);
        if (!sol.converged)
            throw std::runtime_error("solver did not converge: span " +
                                     format_double(sol.span_residual));
        return sol.policy;
    }
    if (name == "rs") return RandomizedStationary{params.p_alpha};
    if (name == "greedy") return Greedy{};
    throw std::invalid_argument("unknown policy '" + name + "'");
}

double bellman_residual(const Solution& sol, const SystemParams& params) {
    double worst = 0.0;
    for (const State& s : enumerate_states(params)) {
        double best = 0.0;
        for (Action a = 0; a <= 1; ++a) {
            double q = 0.0;
            for (const auto& [succ, p] : transition_kernel(s, a, params).entries)
                q += p * sol.v[state_index(params, succ)];
            if (a == 0 || q < best) best = q;
        }
        const double lhs = sol.theta_star + sol.v[state_index(params, s)];
        worst = std::max(worst, std::abs(lhs - (s.delta + best)));
    }
    return worst;
}

// The k-th sweep-row seed is the (k+1)-th output of the base stream; the
// counter form lets rows be seeded independently of evaluation order.
std::uint64_t nth_seed(std::uint64_t base, std::uint64_t k) {
    return UniformStream(base + k * 0x9E3779B97F4A7C15ull).next_u64();
}

constexpr const char* kMetricsHeader = "p,q,beta,p_s,policy,method,avg_via,avg_energy,std_err,error";

std::string row_prefix(const SystemParams& params, const std::string& policy) {
    return format_double(params.p) + ',' + format_double(params.q) + ',' +
           format_double(params.beta) + ',' + format_double(params.p_s) + ',' + policy + ',';
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    const json root = json::parse(in);
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
    require_keys(root, "top level", {"params", "sweep", "policies", "sim", "solver", "out_dir", "jobs"});

    ExperimentConfig config;
    if (root.contains("params")) {
        const json& p = root.at("params");
        require_keys(p, "params", {"p", "q", "beta", "p_s", "e_max", "delta_max", "p_alpha"});
        if (p.contains("p")) config.params.p = p.at("p").get<double>();
        if (p.contains("q")) config.params.q = p.at("q").get<double>();
        if (p.contains("beta")) config.params.beta = p.at("beta").get<double>();
        if (p.contains("p_s")) config.params.p_s = p.at("p_s").get<double>();
        if (p.contains("e_max")) config.params.e_max = p.at("e_max").get<int>();
        if (p.contains("delta_max")) config.params.delta_max = p.at("delta_max").get<int>();
        if (p.contains("p_alpha")) config.params.p_alpha = p.at("p_alpha").get<double>();
    }
    if (root.contains("sweep")) {
        for (const auto& [axis, values] : root.at("sweep").items()) {
            static constexpr std::array<std::string_view, 4> axes{"p", "q", "beta", "p_s"};
            if (std::find(axes.begin(), axes.end(), axis) == axes.end())
                throw std::invalid_argument("config: unknown sweep axis '" + axis + "'");
            auto list = values.get<std::vector<double>>();
            if (list.empty())
                throw std::invalid_argument("config: sweep axis '" + axis + "' is empty");
            config.sweep[axis] = std::move(list);
        }
    }
    if (root.contains("policies")) {
        config.policies = root.at("policies").get<std::vector<std::string>>();
        if (config.policies.empty())
            throw std::invalid_argument("config: policies list is empty");
        for (const std::string& name : config.policies)
            if (name != "optimal" && name != "rs" && name != "greedy")
                throw std::invalid_argument("config: unknown policy '" + name + "'");
    }
    if (root.contains("sim")) {
        const json& s = root.at("sim");
        require_keys(s, "sim", {"horizon", "seed", "burn_in", "record_trace"});
        if (s.contains("horizon")) config.sim.horizon = s.at("horizon").get<long>();
        if (s.contains("seed")) config.sim.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("burn_in")) config.sim.burn_in = s.at("burn_in").get<long>();
        if (s.contains("record_trace")) config.sim.record_trace = s.at("record_trace").get<bool>();
    }
    if (root.contains("solver")) {
        const json& s = root.at("solver");
        require_keys(s, "solver", {"epsilon", "max_iters", "damping", "reference"});
        if (s.contains("epsilon")) config.solver.epsilon = s.at("epsilon").get<double>();
        if (s.contains("max_iters")) config.solver.max_iters = s.at("max_iters").get<long>();
        if (s.contains("damping")) config.solver.damping = s.at("damping").get<double>();
        if (s.contains("reference")) {
            const auto ref = s.at("reference").get<std::vector<int>>();
            if (ref.size() != 3)
                throw std::invalid_argument("config: solver.reference must be [e, x, delta]");
            config.solver.reference = State{ref[0], ref[1], ref[2]};
        }
    }
    if (root.contains("out_dir")) config.out_dir = root.at("out_dir").get<std::string>();
    if (root.contains("jobs")) config.jobs = root.at("jobs").get<int>();

    validate_params(config.params);
    return config;
}

std::vector<SystemParams> sweep_combinations(const ExperimentConfig& config) {
    static constexpr std::array<const char*, 4> axes{"p", "q", "beta", "p_s"};
    std::array<std::vector<double>, 4> values;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto it = config.sweep.find(axes[i]);
        if (it != config.sweep.end()) values[i] = it->second;
    }

    std::vector<SystemParams> combos;
    auto base = [&](std::size_t i, double fallback) {
        return values[i].empty() ? std::vector<double>{fallback} : values[i];
    };
    for (double p : base(0, config.params.p))
        for (double q : base(1, config.params.q))
            for (double beta : base(2, config.params.beta))
                for (double p_s : base(3, config.params.p_s)) {
                    SystemParams params = config.params;
                    params.p = p;
                    params.q = q;
                    params.beta = beta;
                    params.p_s = p_s;
                    validate_params(params);
                    combos.push_back(params);
                }
    return combos;
}

Solution run_solve(const ExperimentConfig& config) {
    Solution sol = relative_value_iteration(config.params, config.solver);

    std::ofstream grid = open_out(out_path(config, "policy.csv"));
    grid << "e,x,delta,action\n";
    for (const State& s : enumerate_states(config.params))
        grid << s.e << ',' << s.x << ',' << s.delta << ','
             << static_cast<int>(sol.policy.at(s)) << '\n';

    json summary;
    summary["theta_rvi"] = sol.theta_star;
    summary["iterations"] = sol.iterations;
    summary["span_residual"] = sol.span_residual;
    summary["converged"] = sol.converged;
    const ExactMetrics exact = exact_metrics(Policy{sol.policy}, config.params);
    summary["theta_star"] = exact.avg_via;
    summary["eval_method"] = to_string(exact.method);

    std::ofstream out = open_out(out_path(config, "solve_summary.json"));
    out << summary.dump(2) << '\n';
    return sol;
}

namespace {

struct SweepRow {
    std::string exact_line;
    std::string sim_line;  // empty when simulation is disabled
    int failures = 0;
};

SweepRow compute_sweep_row(const SystemParams& params, const std::string& policy_name,
                           const ExperimentConfig& config, std::uint64_t task_index) {
    SweepRow row;
    const std::string prefix = row_prefix(params, policy_name);

    Policy policy = Greedy{};
    std::string policy_error;
    try {
        policy = make_policy(policy_name, params, config.solver);
    } catch (const std::exception& ex) {
        policy_error = sanitize(ex.what());
    }

    if (policy_error.empty()) {
        try {
            const ExactMetrics m = exact_metrics(policy, params);
            row.exact_line = prefix + "exact," + format_double(m.avg_via) + ',' +
                             format_double(m.avg_energy) + ",,";
        } catch (const std::exception& ex) {
            row.exact_line = prefix + "exact,,,," + sanitize(ex.what());
            ++row.failures;
        }
    } else {
        row.exact_line = prefix + "exact,,,," + policy_error;
        ++row.failures;
    }

    if (config.sim.horizon > 0) {
        if (policy_error.empty()) {
            try {
                SimConfig sim = config.sim;
                sim.seed = nth_seed(config.sim.seed, task_index);
                const SimStats stats = simulate(policy, params, sim);
                row.sim_line = prefix + "sim," + format_double(stats.avg_via) + ',' +
                               format_double(stats.avg_energy) + ',' +
                               format_double(stats.via_std_error) + ',';
            } catch (const std::exception& ex) {
                row.sim_line = prefix + "sim,,,," + sanitize(ex.what());
                ++row.failures;
            }
        } else {
            row.sim_line = prefix + "sim,,,," + policy_error;
            ++row.failures;
        }
    }
    return row;
}

}  // namespace

int run_sweep(const ExperimentConfig& config) {
    const std::vector<SystemParams> combos = sweep_combinations(config);

    struct Task {
        SystemParams params;
        std::string policy;
    };
    std::vector<Task> tasks;
    tasks.reserve(combos.size() * config.policies.size());
    for (const SystemParams& params : combos)
        for (const std::string& name : config.policies) tasks.push_back({params, name});

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) return;
            rows[i] = compute_sweep_row(tasks[i].params, tasks[i].policy, config, i);
        }
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const std::size_t n = std::min(static_cast<std::size_t>(jobs), tasks.size());
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::ofstream out = open_out(out_path(config, "metrics.csv"));
    out << kMetricsHeader << '\n';
    int failed = 0;
    for (const SweepRow& row : rows) {
        out << row.exact_line << '\n';
        if (!row.sim_line.empty()) out << row.sim_line << '\n';
        failed += row.failures;
    }
    return failed;
}

bool VerifyReport::all_passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const VerifyCheck& c) { return c.status == "fail"; });
}

VerifyReport run_verify(const ExperimentConfig& config) {
    VerifyReport report;
    auto add = [&](std::string name, bool pass, double residual, std::string detail = "") {
        report.checks.push_back(
            {std::move(name), pass ? "pass" : "fail", residual, std::move(detail)});
    };
    auto skip = [&](std::string name, std::string detail) {
        report.checks.push_back({std::move(name), "skipped", 0.0, std::move(detail)});
    };
    const SystemParams& params = config.params;
    const double tol = 10.0 * config.solver.epsilon;

    const KernelReport kernel = validate_kernel(params);
    add("kernel-valid", kernel.ok(), static_cast<double>(kernel.violations.size()),
        kernel.ok() ? "rows checked: " + std::to_string(kernel.rows_checked)
                    : kernel.violations.front());

    const Solution sol = relative_value_iteration(params, config.solver);
    add("solver-converged", sol.converged, sol.span_residual,
        "iterations: " + std::to_string(sol.iterations));

    const double residual = bellman_residual(sol, params);
    add("bellman-residual", residual < tol, residual);

    const ExactMetrics exact = exact_metrics(Policy{sol.policy}, params);
    const double gain_gap = std::abs(sol.theta_star - exact.avg_via);
    add("gain-vs-exact", gain_gap < tol, gain_gap,
        std::string("evaluation method: ") + to_string(exact.method));

    {
        SolverOptions alt = config.solver;
        alt.reference = State{params.e_max, 1, params.delta_max};
        const Solution other = relative_value_iteration(params, alt);
        const double gap = std::abs(sol.theta_star - other.theta_star);
        add("reference-independence", other.converged && gap < tol, gap);
    }
    {
        SolverOptions alt = config.solver;
        UniformStream stream(0x5eed);
        alt.initial_value.resize(state_count(params));
        for (double& v : alt.initial_value) v = 10.0 * stream.next();
        const Solution other = relative_value_iteration(params, alt);
        const double gap = std::abs(sol.theta_star - other.theta_star);
        const bool same_policy = other.policy.action == sol.policy.action;
        add("initial-independence", other.converged && gap < tol && same_policy, gap,
            same_policy ? "" : "extracted policies differ");
    }

    const ThresholdReport thresholds = threshold_report(sol.policy, params);
    add("threshold-structure", thresholds.is_threshold(),
        static_cast<double>(thresholds.violations.size()),
        thresholds.is_threshold()
            ? ""
            : std::string(to_string(thresholds.violations.front().rule)) + " at " +
                  describe(thresholds.violations.front().state));

    {
        const DeltaVProfile profile = delta_v_profile(sol.v, params);
        double worst = 0.0;
        for (int e = 0; e <= params.e_max; ++e)
            for (int x = 0; x <= 1; ++x)
                for (int d = 1; d < params.delta_max; ++d) {
                    const double cur = profile.dv[state_index(params, State{e, x, d})];
                    const double next = profile.dv[state_index(params, State{e, x, d + 1})];
                    worst = std::max(worst, next - cur);
                }
        add("dv-monotone", profile.violations.empty(), worst,
            profile.violations.empty() ? "" : "first at " + describe(profile.violations.front()));
    }

    if (state_count(params) <= 14) {
        const BruteForceResult bf = brute_force_optimal(params);
        const double gap = std::abs(sol.theta_star - bf.theta);
        add("brute-force-agreement", gap < 1e-6, gap);
    } else {
        skip("brute-force-agreement",
             "instance has " + std::to_string(state_count(params)) + " states (limit 14)");
    }

    for (const std::string& name : config.policies) {
        const std::string check = "sim-vs-exact-" + name;
        if (config.sim.horizon <= 0) {
            skip(check, "simulation disabled (horizon 0)");
            continue;
        }
        const Policy policy = name == "optimal" ? Policy{sol.policy}
                                                : make_policy(name, params, config.solver);
        const ExactMetrics m = exact_metrics(policy, params);
        const SimStats stats = simulate(policy, params, config.sim);
        const double gap = std::abs(stats.avg_via - m.avg_via);
        const double allowed = std::max(0.01 * m.avg_via, 3.0 * stats.via_std_error);
        add(check, gap <= allowed, gap, "tolerance: " + format_double(allowed));
    }

    json doc;
    doc["all_passed"] = report.all_passed();
    doc["checks"] = json::array();
    for (const VerifyCheck& c : report.checks) {
        json entry;
        entry["name"] = c.name;
        entry["status"] = c.status;
        entry["residual"] = c.residual;
        entry["detail"] = c.detail;
        doc["checks"].push_back(entry);
    }
    std::ofstream out = open_out(out_path(config, "verify_report.json"));
    out << doc.dump(2) << '\n';
    return report;
}

std::vector<std::pair<std::string, SimStats>> run_simulate(const ExperimentConfig& config) {
    std::vector<std::pair<std::string, SimStats>> results;
    std::ofstream out = open_out(out_path(config, "sim.csv"));
    out << kMetricsHeader << '\n';
    for (const std::string& name : config.policies) {
        const Policy policy = make_policy(name, config.params, config.solver);
        const SimStats stats = simulate(policy, config.params, config.sim);
        out << row_prefix(config.params, name) << "sim," << format_double(stats.avg_via) << ','
            << format_double(stats.avg_energy) << ',' << format_double(stats.via_std_error)
            << ",\n";
        results.emplace_back(name, stats);
    }
    return results;
}

void run_trace(const ExperimentConfig& config) {
    for (const std::string& name : config.policies) {
        const Policy policy = make_policy(name, config.params, config.solver);
        SimConfig sim = config.sim;
        sim.record_trace = true;
        const std::vector<TraceRow> rows = trace(policy, config.params, sim);
        std::ofstream out = open_out(out_path(config, "trace_" + name + ".csv"));
        out << "t,e,x,delta,action,channel,arrival\n";
        for (const TraceRow& r : rows) {
            out << r.t << ',' << r.e << ',' << r.x << ',' << r.delta << ',' << r.action << ',';
            if (r.channel) out << *r.channel;
            out << ',' << r.arrival << '\n';
        }
    }
}

}  // namespace viamdp
