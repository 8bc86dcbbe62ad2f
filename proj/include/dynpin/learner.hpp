#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynpin/game.hpp"
#include "dynpin/random.hpp"
#include "dynpin/simplex.hpp"

namespace dynpin {

struct LearnerConfig {
    double epsilon = 0.005;  ///< constant step size, (0, 1]
    double lambda = 0.005;   ///< perturbation mass, [0, 1)

    void validate() const;

    friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

/// Nominal strategies of all active agents plus the iteration counter.
struct StrategyState {
    std::vector<SimplexPoint> nominal;
    LearnerConfig config;
    std::uint64_t step_count = 0;

    std::size_t agent_count() const noexcept { return nominal.size(); }
    std::size_t action_count() const noexcept { return nominal.empty() ? 0 : nominal.front().size(); }

    friend bool operator==(const StrategyState&, const StrategyState&) = default;
};

/// Every agent starts at the uniform distribution over `actions` CPUs.
StrategyState init_state(std::size_t agents, std::size_t actions, const LearnerConfig& config);

/// Samples one action per agent from its perturbed strategy. Each agent draws
/// from its own sub-stream split off `rng`, keyed by agent index.
AssignmentProfile select_actions(const StrategyState& state, RandomStream& rng);

/// x + gain * (e_action - x), before projection.
std::vector<double> reinforce(const SimplexPoint& x, std::size_t action, double gain);

/// Moves each x_i toward the vertex of its played action by epsilon * u_i and
/// projects back onto the simplex. Utilities must lie in (0, 1].
StrategyState update_nominal(const StrategyState& state, const AssignmentProfile& profile,
                             std::span<const double> utilities);

/// New agent appended with the uniform strategy.
StrategyState add_agent(const StrategyState& state);
/// Removes agent `index`; the others keep their strategies untouched.
StrategyState remove_agent(const StrategyState& state, std::size_t index);

struct RmStepResult {
    StrategyState state;
    AssignmentProfile next;
    double utility = 0.0;  ///< common utility fed to the update
};

/// One resource-manager period: turns the measured speeds of `played` into the
/// common utility f / speed_scale, reinforces, then samples the next profile.
///
/// Measurements must be strictly positive and finite (MeasurementError
/// otherwise). A measured objective <= 0 is a ConfigError. Measurement noise
/// can push the utility above 1; it is saturated at 1.
RmStepResult rm_step(const StrategyState& state, const GameSpec& game, const AssignmentProfile& played,
                     std::span<const double> measured_speeds, RandomStream& rng);

}  // namespace dynpin
