#include "dynpin/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dynpin/errors.hpp"
#include "dynpin/metrics.hpp"
#include "dynpin/oracle.hpp"
#include "dynpin/report.hpp"
#include "dynpin/scenario_io.hpp"

namespace dynpin {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (report_nash && !(delta > 0.0)) throw std::invalid_argument("delta must be > 0 when reporting Nash metrics");
}

std::vector<Trace> run_replicates(const Scenario& scenario, std::size_t replicates,
                                  std::optional<BaselinePolicy> baseline) {
    std::vector<Trace> traces(replicates);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(replicates, std::thread::hardware_concurrency()));
    for (std::size_t first = 0; first < replicates; first += workers) {
        std::vector<std::future<Trace>> batch;
        for (std::size_t r = first; r < std::min(replicates, first + workers); ++r) {
            Scenario s = scenario;
            s.seed = scenario.seed + r;
            batch.push_back(std::async(std::launch::async, [s = std::move(s), baseline] {
                return baseline ? run_baseline(s, *baseline) : run(s);
            }));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) traces[first + i] = batch[i].get();
    }
    return traces;
}

namespace {

std::string csv_name(std::string_view kind, std::size_t replicate) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "trace_%.*s_%03zu.csv", static_cast<int>(kind.size()), kind.data(), replicate);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

ojson stats_or_reason(const std::vector<Trace>& traces, std::optional<CompletionStats>& stats) {
    try {
        stats = completion_stats(traces);
        return to_json(*stats);
    } catch (const std::invalid_argument& e) {
        return ojson{{"unavailable", e.what()}};
    }
}

std::string format_cell(const std::optional<CompletionStats>& stats, std::size_t r) {
    if (!stats) return "n/a";
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << stats->makespans[r] << " sec";
    return out.str();
}

void print_table(std::ostream& console, std::size_t replicates, const std::optional<CompletionStats>& rl,
                 const std::optional<BaselinePolicy>& baseline, const std::optional<CompletionStats>& base) {
    const int w = 22;
    console << std::left << std::setw(8) << "Run #" << std::setw(w) << "RL";
    if (baseline) console << std::setw(w) << to_string(*baseline);
    console << '\n';
    for (std::size_t r = 0; r < replicates; ++r) {
        console << std::setw(8) << r + 1 << std::setw(w) << format_cell(rl, r);
        if (baseline) console << std::setw(w) << format_cell(base, r);
        console << '\n';
    }
    auto summary = [&](const char* label, auto field) {
        console << std::setw(8) << label;
        for (const auto* s : {&rl, &base}) {
            if (s == &base && !baseline) break;
            std::ostringstream cell;
            if (*s) cell << std::fixed << std::setprecision(2) << field(**s) << " sec";
            else cell << "n/a";
            console << std::setw(w) << cell.str();
        }
        console << '\n';
    };
    summary("aver.", [](const CompletionStats& s) { return s.mean; });
    summary("s.d.", [](const CompletionStats& s) { return s.sd; });
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& console) {
    config.validate();
    ExperimentOutcome outcome;

    Scenario scenario = parse_scenario(config.scenario_path);
    if (config.seed) scenario.seed = *config.seed;

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir)) {
        throw std::runtime_error("cannot create output directory " + config.output_dir.string());
    }

    const std::vector<Trace> rl = run_replicates(scenario, config.replicates);
    std::vector<Trace> base;
    if (config.baseline) base = run_replicates(scenario, config.replicates, config.baseline);

    auto emit_traces = [&](const std::vector<Trace>& traces, std::string_view kind) {
        for (std::size_t r = 0; r < traces.size(); ++r) {
            std::ostringstream csv;
            write_trace_csv(csv, traces[r]);
            const fs::path path = config.output_dir / csv_name(kind, r);
            write_file(path, csv.str());
            outcome.artifacts.push_back(path);
        }
    };
    emit_traces(rl, "rl");
    if (config.baseline) emit_traces(base, to_string(*config.baseline));

    ojson summary;
    summary["scenario"] = to_json(scenario);
    summary["replicates"] = config.replicates;
    summary["seeds"] = ojson::array();
    for (std::size_t r = 0; r < config.replicates; ++r) summary["seeds"].push_back(scenario.seed + r);

    std::optional<CompletionStats> rl_stats, base_stats;
    summary["rl"] = {{"completion_stats", stats_or_reason(rl, rl_stats)}};
    if (config.baseline) {
        summary["baseline"] = {{"policy", to_string(*config.baseline)},
                               {"completion_stats", stats_or_reason(base, base_stats)}};
    }

    if (config.report_nash) {
        try {
            const EquilibriumReport report = enumerate_pure_nash(scenario.full_game());
            const fs::path path = config.output_dir / "equilibrium.json";
            write_file(path, to_json(report).dump(2) + "\n");
            outcome.artifacts.push_back(path);

            ojson metric;
            metric["delta"] = config.delta;
            metric["window"] = "last 20% of steps";
            metric["per_run"] = ojson::array();
            const std::size_t n = scenario.threads.size();
            for (const Trace& trace : rl) {
                const StepWindow window = StepWindow::tail(trace.steps.size(), 0.2);
                const bool full = window.size() > 0 &&
                                  std::all_of(trace.steps.begin() + static_cast<std::ptrdiff_t>(window.begin),
                                              trace.steps.end(), [n](const StepRecord& s) { return s.active.size() == n; });
                if (full) {
                    metric["per_run"].push_back(time_fraction_near(trace, report.pure_nash, config.delta, window));
                } else {
                    metric["per_run"].push_back(nullptr);
                }
            }
            summary["time_fraction_near"] = std::move(metric);
        } catch (const SizeError& e) {
            outcome.errors.push_back(e.what());
            summary["time_fraction_near"] = nullptr;
        }
    }

    summary["status"] = outcome.errors.empty() ? "complete" : "partial";
    summary["errors"] = outcome.errors;
    const fs::path summary_path = config.output_dir / "summary.json";
    write_file(summary_path, summary.dump(2) + "\n");
    outcome.artifacts.push_back(summary_path);

    print_table(console, config.replicates, rl_stats, config.baseline, base_stats);
    for (const auto& e : outcome.errors) console << "error: " << e << '\n';
    outcome.exit_code = outcome.errors.empty() ? 0 : 1;
    return outcome;
}

}  // namespace dynpin
