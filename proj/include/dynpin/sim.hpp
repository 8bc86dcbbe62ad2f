#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynpin/game.hpp"
#include "dynpin/learner.hpp"
#include "dynpin/random.hpp"
#include "dynpin/simplex.hpp"

namespace dynpin {

/// Platform, workload and learner parameters of one closed-loop experiment.
struct Scenario {
    Platform platform;
    std::vector<ThreadSpec> threads;
    double period_sec = 0.3;
    std::size_t horizon_steps = 1000;
    double noise_cv = 0.0;
    double gamma = 0.0;
    double epsilon = 0.005;
    double lambda = 0.005;
    double speed_scale = 1.0;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on the first broken invariant.
    void validate() const;

    LearnerConfig learner() const { return {epsilon, lambda}; }
    /// Game over the given scenario thread indices.
    GameSpec game_for(std::span<const std::size_t> active) const;
    /// Game over all threads, ignoring arrival times.
    GameSpec full_game() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// One RM period. Vectors are indexed by position in `active`.
struct StepRecord {
    std::size_t step = 0;
    std::vector<std::size_t> active;  ///< scenario thread indices, in activation order
    AssignmentProfile profile;        ///< placement in force during the period
    std::vector<double> true_speeds;
    std::vector<double> measured_speeds;
    double utility = 0.0;  ///< common utility fed to the learner
    /// Nominal strategies after this period's update (the ones that choose
    /// the next placement).
    std::vector<SimplexPoint> strategies;
};

struct Trace {
    double period_sec = 0.3;
    std::vector<StepRecord> steps;
    /// Per scenario thread: first step whose cumulative work reached total_work.
    std::vector<std::optional<std::size_t>> completion_step;

    bool all_completed() const;
    /// (completion_step + 1) * period_sec, the wall time at the end of that period.
    std::optional<double> completion_time(std::size_t thread) const;
    /// Latest completion time; throws std::invalid_argument when a thread never finished.
    double makespan() const;
};

// ── Measurement / placement boundary ────────────────────────────────

/// What the resource manager needs from the machine: apply a placement and
/// read back per-thread speeds after one period. A live backend would wrap
/// affinity syscalls and hardware counters; only the simulated one exists.
class PlacementBackend {
  public:
    virtual ~PlacementBackend() = default;

    virtual void apply(std::span<const std::size_t> active, const AssignmentProfile& profile) = 0;
    /// Measured speeds of the active threads for the period just elapsed.
    virtual std::vector<double> measure() = 0;
};

/// Contention model plus multiplicative measurement noise
/// v * max(eta, 0.01), eta ~ N(1, noise_cv).
class SimulatedBackend final : public PlacementBackend {
  public:
    SimulatedBackend(const Scenario& scenario, RandomStream& noise);

    void apply(std::span<const std::size_t> active, const AssignmentProfile& profile) override;
    std::vector<double> measure() override;

    /// Noise-free speeds of the last applied placement.
    const std::vector<double>& true_speeds() const noexcept { return true_speeds_; }

  private:
    const Scenario& scenario_;
    RandomStream& noise_;
    std::vector<double> true_speeds_;
};

// ── Runs ────────────────────────────────────────────────────────────

/// Closed-loop run of the learning resource manager. Ends early once every
/// thread has completed. Throws ConfigError when a reachable active-thread
/// game fails validate_game.
Trace run(const Scenario& scenario);

enum class BaselinePolicy { StaticRandom, RoundRobin, GreedyLeastLoaded };

std::string_view to_string(BaselinePolicy policy);
/// Parses "static-random", "round-robin" or "greedy-least-loaded".
std::optional<BaselinePolicy> parse_baseline(std::string_view name);

/// Same loop as run(), but placements come from a fixed policy and nothing is learned.
Trace run_baseline(const Scenario& scenario, BaselinePolicy policy);

}  // namespace dynpin
