#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dynpin/game.hpp"
#include "dynpin/sim.hpp"
#include "dynpin/simplex.hpp"

namespace dynpin {

/// Half-open range [begin, end) of trace record indices.
struct StepWindow {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end > begin ? end - begin : 0; }

    /// The last `fraction` of `steps` records, rounded to the nearest record.
    static StepWindow tail(std::size_t steps, double fraction);
};

/// min over `profiles` of vertex_distance(x, profile).
double distance_to_set(std::span<const SimplexPoint> x, std::span<const AssignmentProfile> profiles);

/// Fraction of records in `window` whose strategies lie strictly within
/// `delta` of some profile in `nash_set`.
double time_fraction_near(const Trace& trace, std::span<const AssignmentProfile> nash_set, double delta,
                          StepWindow window);

/// Index of the first record in `window` within `delta` of `nash_set`.
std::optional<std::size_t> first_entry(const Trace& trace, std::span<const AssignmentProfile> nash_set, double delta,
                                       StepWindow window);

struct CompletionStats {
    std::vector<double> makespans;  ///< seconds, one per trace
    double mean = 0.0;
    double sd = 0.0;          ///< sample standard deviation (n - 1 denominator)
    bool sd_defined = false;  ///< false for a single trace; sd is then reported as 0
};

CompletionStats summarize_makespans(std::span<const double> makespans);

/// Throws std::invalid_argument naming the first trace with an unfinished thread.
CompletionStats completion_stats(std::span<const Trace> traces);

}  // namespace dynpin
