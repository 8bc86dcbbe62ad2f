#include "dynpin/learner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dynpin/errors.hpp"

namespace dynpin {

void LearnerConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("learner: epsilon must lie in (0, 1]");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("learner: lambda must lie in [0, 1)");
}

StrategyState init_state(std::size_t agents, std::size_t actions, const LearnerConfig& config) {
    if (agents == 0) throw std::invalid_argument("init_state: need at least one agent");
    if (actions == 0) throw std::invalid_argument("init_state: need at least one action");
    config.validate();
    return StrategyState{std::vector<SimplexPoint>(agents, SimplexPoint::uniform(actions)), config, 0};
}

AssignmentProfile select_actions(const StrategyState& state, RandomStream& rng) {
    AssignmentProfile profile{std::vector<std::size_t>(state.agent_count())};
    for (std::size_t i = 0; i < state.agent_count(); ++i) {
        SplitMix64 sub = rng.split(i);
        profile.cpu_of[i] = sample_index(perturb(state.nominal[i], state.config.lambda), sub);
    }
    return profile;
}

std::vector<double> reinforce(const SimplexPoint& x, std::size_t action, double gain) {
    if (action >= x.size()) throw std::invalid_argument("reinforce: action out of range");
    std::vector<double> next(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double target = (j == action) ? 1.0 : 0.0;
        next[j] = x[j] + gain * (target - x[j]);
    }
    return next;
}

StrategyState update_nominal(const StrategyState& state, const AssignmentProfile& profile,
                             std::span<const double> utilities) {
    if (profile.size() != state.agent_count() || utilities.size() != state.agent_count()) {
        throw std::invalid_argument("update_nominal: profile/utility sizes do not match the agent count");
    }
    StrategyState next = state;
    for (std::size_t i = 0; i < state.agent_count(); ++i) {
        const double u = utilities[i];
        if (!(u > 0.0 && u <= 1.0)) {
            throw std::invalid_argument("update_nominal: utility " + std::to_string(u) + " of agent " +
                                        std::to_string(i) + " is outside (0, 1]");
        }
        next.nominal[i] = project_to_simplex(reinforce(state.nominal[i], profile[i], state.config.epsilon * u));
    }
    ++next.step_count;
    return next;
}

StrategyState add_agent(const StrategyState& state) {
    if (state.nominal.empty()) throw std::invalid_argument("add_agent: action count unknown for an empty state");
    StrategyState next = state;
    next.nominal.push_back(SimplexPoint::uniform(state.action_count()));
    return next;
}

StrategyState remove_agent(const StrategyState& state, std::size_t index) {
    if (index >= state.agent_count()) throw std::invalid_argument("remove_agent: index out of range");
    StrategyState next = state;
    next.nominal.erase(next.nominal.begin() + static_cast<std::ptrdiff_t>(index));
    return next;
}

RmStepResult rm_step(const StrategyState& state, const GameSpec& game, const AssignmentProfile& played,
                     std::span<const double> measured_speeds, RandomStream& rng) {
    if (measured_speeds.size() != state.agent_count()) {
        throw std::invalid_argument("rm_step: expected " + std::to_string(state.agent_count()) + " measurements");
    }
    for (std::size_t i = 0; i < measured_speeds.size(); ++i) {
        if (!(measured_speeds[i] > 0.0) || !std::isfinite(measured_speeds[i])) {
            std::ostringstream msg;
            msg << "rm_step: measured speed " << measured_speeds[i] << " of agent " << i << " is not positive";
            throw MeasurementError(msg.str());
        }
    }
    const double f = objective_value(measured_speeds, game.gamma);
    double u = f / game.speed_scale;
    if (!(u > 0.0)) {
        std::ostringstream msg;
        msg << "rm_step: measured objective " << f << " at profile " << to_string(played)
            << " is not positive; reduce gamma";
        throw ConfigError(msg.str());
    }
    u = std::min(u, 1.0);

    RmStepResult result;
    result.utility = u;
    result.state = update_nominal(state, played, std::vector<double>(state.agent_count(), u));
    result.next = select_actions(result.state, rng);
    return result;
}

}  // namespace dynpin
