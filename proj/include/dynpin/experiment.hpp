#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dynpin/sim.hpp"

namespace dynpin {

struct ExperimentConfig {
    std::filesystem::path scenario_path;
    std::size_t replicates = 1;
    std::optional<BaselinePolicy> baseline;
    std::filesystem::path output_dir = "out";
    bool report_nash = false;
    double delta = 0.1;  ///< neighbourhood radius for the time-near-Nash metric
    std::optional<std::uint64_t> seed;  ///< overrides the scenario seed

    void validate() const;
};

struct ExperimentOutcome {
    int exit_code = 0;
    std::vector<std::string> errors;
    std::vector<std::filesystem::path> artifacts;
};

/// Replicate r runs with seed scenario.seed + r. Replicates run concurrently;
/// the result is ordered by r and independent of scheduling.
std::vector<Trace> run_replicates(const Scenario& scenario, std::size_t replicates,
                                  std::optional<BaselinePolicy> baseline = std::nullopt);

/// Runs the replicates (and matched baseline runs), writes one trace CSV per
/// run, summary.json and, with report_nash, equilibrium.json into
/// output_dir, then prints a makespan table to `console`.
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& console);

}  // namespace dynpin
