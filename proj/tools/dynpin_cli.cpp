// dynpin: learn thread-to-CPU placements in simulation and analyse the
// underlying assignment game.
//
//   dynpin run scenarios/experiment1.json --replicates 10 --report-nash --out out/
//   dynpin nash scenarios/experiment1.json
//   dynpin validate scenarios/experiment2.json

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dynpin/errors.hpp"
#include "dynpin/experiment.hpp"
#include "dynpin/oracle.hpp"
#include "dynpin/report.hpp"
#include "dynpin/scenario_io.hpp"

namespace {

int cmd_nash(const std::string& path, const std::string& out) {
    const dynpin::Scenario scenario = dynpin::parse_scenario(path);
    const auto report = dynpin::enumerate_pure_nash(scenario.full_game());
    const std::string doc = dynpin::to_json(report).dump(2) + "\n";
    if (out.empty()) {
        std::cout << doc;
    } else {
        std::filesystem::create_directories(out);
        const auto target = std::filesystem::path(out) / "equilibrium.json";
        std::ofstream file(target, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + target.string());
        file << doc;
    }
    std::cerr << report.pure_nash.size() << " pure Nash equilibria, " << report.efficient.size()
              << " efficient profiles, f_max = " << report.f_max << '\n';
    return 0;
}

int cmd_validate(const std::string& path) {
    const dynpin::Scenario scenario = dynpin::parse_scenario(path);
    const auto v = dynpin::validate_game(scenario.full_game());
    std::cout << (v.ok ? "ok" : "invalid") << ": " << scenario.threads.size() << " threads on "
              << scenario.platform.cpu_count() << " CPUs, " << v.profiles_checked << " profiles checked"
              << (v.exhaustive ? "" : " (sampled)") << ", f in [" << v.f_min << ", " << v.f_max << "]\n";
    if (!v.caveat.empty()) std::cout << "caveat: " << v.caveat << '\n';
    if (!v.ok) std::cout << "violation: " << v.diagnostics << '\n';
    return v.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning-automata thread pinning: simulation and equilibrium analysis"};
    app.require_subcommand(1);

    dynpin::ExperimentConfig config;
    std::string scenario_path;
    std::string baseline_name;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Run seeded replicates of a scenario and write traces and a summary");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--replicates", config.replicates, "Number of seeded runs")->check(CLI::PositiveNumber);
    run->add_option("--baseline", baseline_name, "Matched baseline policy")
        ->check(CLI::IsMember({"static-random", "round-robin", "greedy-least-loaded"}));
    run->add_option("--delta", config.delta, "Neighbourhood radius for the time-near-Nash metric");
    run->add_option("--out", config.output_dir, "Output directory");
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
    run->add_flag("--report-nash", config.report_nash, "Enumerate equilibria and report time near them");

    std::string nash_out;
    auto* nash = app.add_subcommand("nash", "Enumerate pure Nash equilibria and efficient profiles");
    nash->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    nash->add_option("--out", nash_out, "Write equilibrium.json into this directory instead of stdout");

    auto* validate = app.add_subcommand("validate", "Parse a scenario and check utility positivity");
    validate->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            config.scenario_path = scenario_path;
            if (!baseline_name.empty()) config.baseline = dynpin::parse_baseline(baseline_name);
            if (*seed_opt) config.seed = seed;
            return dynpin::run_experiment(config, std::cout).exit_code;
        }
        if (*nash) return cmd_nash(scenario_path, nash_out);
        if (*validate) return cmd_validate(scenario_path);
    } catch (const dynpin::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
