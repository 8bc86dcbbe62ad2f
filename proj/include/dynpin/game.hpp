#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dynpin {

/// The CPUs threads can be pinned to. `loads[j]` is the fraction of CPU j
/// consumed by work outside the managed application.
struct Platform {
    std::vector<double> capacities;
    std::vector<double> loads;

    std::size_t cpu_count() const noexcept { return capacities.size(); }
    /// capacity_j * (1 - load_j)
    double available(std::size_t j) const { return capacities[j] * (1.0 - loads[j]); }

    /// Throws std::invalid_argument unless there is at least one CPU, every
    /// capacity is positive and every load lies in [0, 1).
    void validate() const;

    friend bool operator==(const Platform&, const Platform&) = default;
};

struct ThreadSpec {
    double demand = 1.0;  ///< work-units/sec the thread can consume at most
    double total_work = std::numeric_limits<double>::infinity();
    std::size_t arrival_step = 0;

    void validate() const;

    friend bool operator==(const ThreadSpec&, const ThreadSpec&) = default;
};

/// Thread-to-CPU assignment, one 0-based CPU index per active thread.
struct AssignmentProfile {
    std::vector<std::size_t> cpu_of;

    std::size_t size() const noexcept { return cpu_of.size(); }
    std::size_t operator[](std::size_t i) const { return cpu_of[i]; }

    friend auto operator<=>(const AssignmentProfile&, const AssignmentProfile&) = default;
};

/// "(1, 3, 1, 2)" with 1-based CPU numbers, for diagnostics and reports.
std::string to_string(const AssignmentProfile& profile);

/// A frozen assignment game over the currently active threads.
struct GameSpec {
    Platform platform;
    std::vector<double> demands;  ///< one entry per agent
    double gamma = 0.0;           ///< variance-penalty weight
    double speed_scale = 1.0;     ///< utilities are f / speed_scale

    std::size_t agent_count() const noexcept { return demands.size(); }
    std::size_t cpu_count() const noexcept { return platform.cpu_count(); }

    /// Structural checks only (sizes, signs). See validate_game for the
    /// exhaustive utility-positivity check.
    void validate() const;
};

// ── Profile enumeration ─────────────────────────────────────────────

/// Number of pure profiles m^n, or nullopt when it exceeds `cap`.
std::optional<std::uint64_t> profile_count(std::size_t agents, std::size_t cpus,
                                           std::uint64_t cap = std::numeric_limits<std::uint64_t>::max());

/// Mixed-radix code of a profile (agent 0 is the least significant digit).
std::uint64_t profile_code(const AssignmentProfile& profile, std::size_t cpus);
AssignmentProfile profile_from_code(std::uint64_t code, std::size_t agents, std::size_t cpus);

// ── Speed model and objective ───────────────────────────────────────

/// Per-thread speeds under proportional-to-demand sharing: a thread on CPU j
/// runs at demand_i * min(1, available_j / resident_demand_j).
std::vector<double> speeds(const AssignmentProfile& profile, const GameSpec& game);

/// (1/n) * sum_i [v_i - gamma * (v_i - mean)^2]. gamma = 0 gives the mean speed.
double objective_value(std::span<const double> speeds, double gamma);

/// Objective of a pure profile, f(alpha, w).
double profile_objective(const AssignmentProfile& profile, const GameSpec& game);

/// Identical-interest utilities: every agent gets f / speed_scale. Throws
/// ConfigError naming the profile when that value falls outside (0, 1].
std::vector<double> utilities(const AssignmentProfile& profile, const GameSpec& game);

// ── Validation ──────────────────────────────────────────────────────

/// Profiles enumerated exhaustively up to this count; beyond it, sampled.
inline constexpr std::uint64_t kExhaustiveProfileLimit = 1'000'000;
inline constexpr std::size_t kValidationSamples = 10'000;

struct GameValidation {
    bool ok = false;
    bool exhaustive = false;  ///< false: a sample was checked, see `caveat`
    std::uint64_t profiles_checked = 0;
    double f_max = 0.0;
    double f_min = 0.0;
    AssignmentProfile argmax_profile;
    std::optional<AssignmentProfile> witness;  ///< first violating profile
    std::string diagnostics;
    std::string caveat;
};

/// Checks that every pure profile has positive utility and that speed_scale
/// bounds the objective from above. Structural errors still throw.
GameValidation validate_game(const GameSpec& game);

}  // namespace dynpin
