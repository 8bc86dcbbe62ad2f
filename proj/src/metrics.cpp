#include "dynpin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynpin {

StepWindow StepWindow::tail(std::size_t steps, double fraction) {
    const auto length = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(steps)));
    return {steps - std::min(length, steps), steps};
}

double distance_to_set(std::span<const SimplexPoint> x, std::span<const AssignmentProfile> profiles) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& profile : profiles) best = std::min(best, vertex_distance(x, profile.cpu_of));
    return best;
}

namespace {

void check_window(const Trace& trace, std::span<const AssignmentProfile> nash_set, StepWindow window,
                  const char* who) {
    if (nash_set.empty()) throw std::invalid_argument(std::string(who) + ": empty Nash set");
    if (window.size() == 0) throw std::invalid_argument(std::string(who) + ": empty window");
    if (window.end > trace.steps.size()) throw std::invalid_argument(std::string(who) + ": window exceeds the trace");
}

}  // namespace

double time_fraction_near(const Trace& trace, std::span<const AssignmentProfile> nash_set, double delta,
                          StepWindow window) {
    check_window(trace, nash_set, window, "time_fraction_near");
    std::size_t near = 0;
    for (std::size_t k = window.begin; k < window.end; ++k) {
        if (distance_to_set(trace.steps[k].strategies, nash_set) < delta) ++near;
    }
    return static_cast<double>(near) / static_cast<double>(window.size());
}

std::optional<std::size_t> first_entry(const Trace& trace, std::span<const AssignmentProfile> nash_set, double delta,
                                       StepWindow window) {
    check_window(trace, nash_set, window, "first_entry");
    for (std::size_t k = window.begin; k < window.end; ++k) {
        if (distance_to_set(trace.steps[k].strategies, nash_set) < delta) return k;
    }
    return std::nullopt;
}

CompletionStats summarize_makespans(std::span<const double> makespans) {
    if (makespans.empty()) throw std::invalid_argument("completion_stats: no makespans");
    CompletionStats stats;
    stats.makespans.assign(makespans.begin(), makespans.end());
    const double n = static_cast<double>(makespans.size());
    // Shifted by the first value so identical makespans give exactly sd = 0.
    const double shift = makespans.front();
    double sum = 0.0;
    for (double x : makespans) sum += x - shift;
    const double mean_offset = sum / n;
    stats.mean = shift + mean_offset;
    if (makespans.size() > 1) {
        double ss = 0.0;
        for (double x : makespans) ss += (x - shift - mean_offset) * (x - shift - mean_offset);
        stats.sd = std::sqrt(ss / (n - 1.0));
        stats.sd_defined = true;
    }
    return stats;
}

CompletionStats completion_stats(std::span<const Trace> traces) {
    std::vector<double> makespans;
    makespans.reserve(traces.size());
    for (std::size_t r = 0; r < traces.size(); ++r) {
        if (!traces[r].all_completed()) {
            throw std::invalid_argument("completion_stats: trace " + std::to_string(r) +
                                        " has threads that never completed");
        }
        makespans.push_back(traces[r].makespan());
    }
    return summarize_makespans(makespans);
}

}  // namespace dynpin
