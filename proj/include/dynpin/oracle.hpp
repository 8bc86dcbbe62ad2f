#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynpin/game.hpp"
#include "dynpin/simplex.hpp"

namespace dynpin {

inline constexpr double kDefaultNashTolerance = 1e-9;

/// Exhaustive analysis of a pure assignment game.
struct EquilibriumReport {
    std::vector<AssignmentProfile> pure_nash;  ///< sorted
    std::vector<AssignmentProfile> efficient;  ///< sorted, argmax of f within tolerance
    /// f(alpha) for every profile, indexed by profile_code.
    std::vector<double> f_values;
    std::size_t agents = 0;
    std::size_t cpus = 0;
    double speed_scale = 1.0;
    double tolerance = kDefaultNashTolerance;
    double f_max = 0.0;

    double f(const AssignmentProfile& profile) const { return f_values[profile_code(profile, cpus)]; }
    bool is_nash(const AssignmentProfile& profile) const;
    bool is_efficient(const AssignmentProfile& profile) const;
};

/// A profile is Nash iff no agent gains more than `tol` in utility by a
/// unilateral switch (ties count as equilibrium). Throws SizeError when the
/// game has more than kExhaustiveProfileLimit profiles.
EquilibriumReport enumerate_pure_nash(const GameSpec& game, double tol = kDefaultNashTolerance);

/// Entry j: expected utility of agent `agent` playing CPU j while the others
/// play their mixed strategies in `sigma`. Exact sum over opponent profiles.
std::vector<double> expected_payoff_vector(std::span<const SimplexPoint> sigma, const GameSpec& game,
                                           std::size_t agent);

struct DriftReport {
    std::vector<std::vector<double>> drift;  ///< per agent, per action
    double sup_norm = 0.0;
};

/// Expected one-step motion of the nominal strategies divided by epsilon:
/// g_i(x) = E[u(alpha) (e_{alpha_i} - x_i)] with alpha drawn from perturb(x, lambda).
DriftReport mean_field_drift(std::span<const SimplexPoint> x, const GameSpec& game, double lambda);

bool is_stationary(std::span<const SimplexPoint> x, const GameSpec& game, double lambda, double tol);

}  // namespace dynpin
