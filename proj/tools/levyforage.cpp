// Command-line front end: single runs, seeded Monte Carlo sweeps and
// statistical law checks. Exit codes: 0 success, 2 configuration error,
// 3 runtime failure, 4 verification failure.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "levyforage/harness.hpp"
#include "levyforage/runner.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/sweep.hpp"
#include "levyforage/verify.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitVerification = 4;

int capped_jobs(int requested) {
    const char* cap_env = std::getenv("LEVYFORAGE_JOBS");
    if (cap_env != nullptr) {
        const int cap = std::atoi(cap_env);
        if (cap >= 1) requested = std::min(requested, cap);
    }
    return std::max(1, requested);
}

levyforage::ScenarioSpec resolve_scenario(const std::string& builtin_name,
                                          const std::string& config_path) {
    if (!builtin_name.empty() && !config_path.empty())
        throw levyforage::ConfigError("use either --scenario or --config, not both");
    if (!builtin_name.empty()) return levyforage::builtin(builtin_name);
    if (!config_path.empty())
        return levyforage::load_spec(levyforage::read_file(config_path));
    throw levyforage::ConfigError("a scenario is required (--scenario NAME or --config FILE)");
}

struct Overrides {
    std::vector<double> mu, rd, drift;
    std::vector<std::string> walker;
    std::string mode;
    double budget = -1.0;
};

// Single-value overrides for `run`; sweeps consume the full lists.
void apply_single_overrides(levyforage::ScenarioSpec& spec, const Overrides& o) {
    using levyforage::ConfigError;
    if (o.mu.size() > 1 || o.rd.size() > 1 || o.drift.size() > 1 || o.walker.size() > 1)
        throw ConfigError("run accepts a single value per override flag");
    if (!o.mu.empty()) spec.law.mu = o.mu.front();
    if (!o.rd.empty()) {
        if (spec.law.ell_min == spec.r_d) spec.law.ell_min = o.rd.front();
        spec.r_d = o.rd.front();
    }
    if (!o.drift.empty()) {
        levyforage::Vec unit = spec.drift;
        if (levyforage::is_zero(unit)) {
            unit = levyforage::Vec::zero(spec.domain.dimension);
            unit[0] = -1.0;
        } else {
            unit = unit * (1.0 / levyforage::norm(unit));
        }
        spec.drift = unit * o.drift.front();
    }
    if (!o.walker.empty()) spec.walker = levyforage::walker_from_name(o.walker.front());
    if (!o.mode.empty()) spec.mode = levyforage::mode_from_name(o.mode);
    if (o.budget >= 0.0) spec.budget = o.budget;
    levyforage::validate(spec);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Memoryless sparse-reward search simulator"};
    app.require_subcommand(1);

    std::string scenario_name, config_path, out_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1, replicates = 1;
    Overrides overrides;

    const auto add_common = [&](CLI::App* cmd, bool with_overrides) {
        cmd->add_option("--scenario", scenario_name, "builtin scenario name");
        cmd->add_option("--config", config_path, "scenario config file (JSON)");
        cmd->add_option("--seed", seed, "base seed");
        cmd->add_option("--out", out_dir, "output directory");
        if (with_overrides) {
            cmd->add_option("--mu", overrides.mu, "jump-law exponent(s)")->delimiter(',');
            cmd->add_option("--rd", overrides.rd, "detection radius value(s)")->delimiter(',');
            cmd->add_option("--drift", overrides.drift, "drift magnitude value(s)")->delimiter(',');
            cmd->add_option("--walker", overrides.walker,
                            "walker kind(s): levy, brownian, uniform-random")
                ->delimiter(',');
            cmd->add_option("--mode", overrides.mode, "foraging mode: df or ndf");
            cmd->add_option("--budget", overrides.budget, "distance budget (0 = default)");
        }
    };

    CLI::App* cmd_run = app.add_subcommand("run", "execute one seeded run");
    add_common(cmd_run, true);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "seeded Monte Carlo parameter sweep");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--replicates", replicates, "replicates per grid cell");
    cmd_sweep->add_option("--jobs", jobs, "worker threads");

    std::string check_id;
    CLI::App* cmd_verify = app.add_subcommand("verify", "run a statistical law check");
    cmd_verify->add_option("check", check_id, "one of: tail, scaling, drift, msd")->required();
    cmd_verify->add_option("--jobs", jobs, "worker threads");

    CLI::App* cmd_scenarios = app.add_subcommand("scenarios", "list builtin scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    jobs = capped_jobs(jobs);

    try {
        if (cmd_scenarios->parsed()) {
            for (const std::string& name : levyforage::builtin_names())
                std::cout << name << "\t" << levyforage::builtin_summary(name) << "\n";
            return 0;
        }

        if (cmd_run->parsed()) {
            levyforage::ScenarioSpec spec = resolve_scenario(scenario_name, config_path);
            apply_single_overrides(spec, overrides);
            const auto art = levyforage::write_run(spec, seed, out_dir);
            std::cout << levyforage::run_summary(spec, art.result);
            std::cout << "trace: " << art.trace_path.string()
                      << "\nmetrics: " << art.metrics_path.string() << "\n";
            return 0;
        }

        if (cmd_sweep->parsed()) {
            levyforage::SweepPlan plan;
            plan.scenario = resolve_scenario(scenario_name, config_path);
            if (!overrides.mode.empty())
                plan.scenario.mode = levyforage::mode_from_name(overrides.mode);
            if (overrides.budget >= 0.0) plan.scenario.budget = overrides.budget;
            plan.mu_values = overrides.mu;
            plan.rd_values = overrides.rd;
            plan.drift_values = overrides.drift;
            for (const std::string& w : overrides.walker)
                plan.walker_values.push_back(levyforage::walker_from_name(w));
            plan.replicates = replicates;
            plan.base_seed = seed;
            plan.jobs = jobs;

            const levyforage::SweepResult result = levyforage::run_sweep(plan);
            const std::string table = levyforage::format_sweep_table(result);
            levyforage::write_sweep_table(table, out_dir);
            std::cout << table;
            if (result.failed_replicates > 0) {
                std::cerr << result.failed_replicates << " replicate(s) failed\n";
                for (const std::string& e : result.errors) std::cerr << "  " << e << "\n";
                return kExitRuntime;
            }
            return 0;
        }

        if (cmd_verify->parsed()) {
            levyforage::CheckReport report;
            if (check_id == "tail") report = levyforage::verify_tail();
            else if (check_id == "scaling") report = levyforage::verify_scaling(200, jobs);
            else if (check_id == "drift") report = levyforage::verify_drift(1000, jobs);
            else if (check_id == "msd") report = levyforage::verify_msd(200, jobs);
            else throw levyforage::ConfigError("unknown check '" + check_id +
                                               "' (expected tail, scaling, drift or msd)");
            std::cout << report.to_string();
            return report.pass ? 0 : kExitVerification;
        }
    } catch (const levyforage::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const levyforage::ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
