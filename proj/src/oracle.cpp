#include "dynpin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dynpin/errors.hpp"

namespace dynpin {

namespace {

std::uint64_t checked_count(std::size_t agents, std::size_t cpus, const char* who) {
    const auto count = profile_count(agents, cpus, kExhaustiveProfileLimit);
    if (!count) {
        throw SizeError(std::string(who) + ": " + std::to_string(cpus) + "^" + std::to_string(agents) +
                        " profiles exceed the enumeration cap of " + std::to_string(kExhaustiveProfileLimit) +
                        "; sample instead");
    }
    return *count;
}

void check_strategies(std::span<const SimplexPoint> x, const GameSpec& game, const char* who) {
    if (x.size() != game.agent_count()) {
        throw std::invalid_argument(std::string(who) + ": strategy profile size does not match the game");
    }
    for (const auto& xi : x) {
        if (xi.size() != game.cpu_count()) {
            throw std::invalid_argument(std::string(who) + ": strategy dimension does not match the CPU count");
        }
    }
}

// f(alpha) / speed_scale for every profile, indexed by profile_code.
std::vector<double> utility_table(const GameSpec& game, std::uint64_t count) {
    std::vector<double> table(count);
    const double scale = game.speed_scale;
    for (std::uint64_t code = 0; code < count; ++code) {
        table[code] = profile_objective(profile_from_code(code, game.agent_count(), game.cpu_count()), game) / scale;
    }
    return table;
}

}  // namespace

bool EquilibriumReport::is_nash(const AssignmentProfile& profile) const {
    return std::binary_search(pure_nash.begin(), pure_nash.end(), profile);
}

bool EquilibriumReport::is_efficient(const AssignmentProfile& profile) const {
    return std::binary_search(efficient.begin(), efficient.end(), profile);
}

EquilibriumReport enumerate_pure_nash(const GameSpec& game, double tol) {
    game.validate();
    if (!(tol >= 0.0)) throw std::invalid_argument("enumerate_pure_nash: tolerance must be >= 0");
    const std::size_t n = game.agent_count();
    const std::size_t m = game.cpu_count();
    const std::uint64_t count = checked_count(n, m, "enumerate_pure_nash");

    EquilibriumReport report;
    report.agents = n;
    report.cpus = m;
    report.speed_scale = game.speed_scale;
    report.tolerance = tol;
    report.f_values.resize(count);

    const std::vector<double> u = utility_table(game, count);
    for (std::uint64_t code = 0; code < count; ++code) report.f_values[code] = u[code] * game.speed_scale;
    const double u_max = *std::max_element(u.begin(), u.end());
    report.f_max = u_max * game.speed_scale;

    // Digit i of a code has weight m^i; a unilateral switch of agent i
    // replaces that digit.
    std::vector<std::uint64_t> weight(n);
    for (std::size_t i = 0, w = 1; i < n; ++i, w *= m) weight[i] = w;

    for (std::uint64_t code = 0; code < count; ++code) {
        bool nash = true;
        for (std::size_t i = 0; i < n && nash; ++i) {
            const std::uint64_t own = (code / weight[i]) % m;
            const std::uint64_t base = code - own * weight[i];
            for (std::size_t j = 0; j < m; ++j) {
                if (u[base + j * weight[i]] > u[code] + tol) {
                    nash = false;
                    break;
                }
            }
        }
        const auto profile = profile_from_code(code, n, m);
        if (nash) report.pure_nash.push_back(profile);
        if (u[code] >= u_max - tol) report.efficient.push_back(profile);
    }
    std::sort(report.pure_nash.begin(), report.pure_nash.end());
    std::sort(report.efficient.begin(), report.efficient.end());
    return report;
}

std::vector<double> expected_payoff_vector(std::span<const SimplexPoint> sigma, const GameSpec& game,
                                           std::size_t agent) {
    game.validate();
    check_strategies(sigma, game, "expected_payoff_vector");
    if (agent >= game.agent_count()) throw std::invalid_argument("expected_payoff_vector: agent out of range");
    const std::size_t n = game.agent_count();
    const std::size_t m = game.cpu_count();
    const std::uint64_t opponents = checked_count(n - 1, m, "expected_payoff_vector");

    std::vector<double> payoff(m, 0.0);
    AssignmentProfile profile{std::vector<std::size_t>(n)};
    for (std::uint64_t code = 0; code < opponents; ++code) {
        // Decode the opponents' digits around `agent`.
        double weight = 1.0;
        std::uint64_t rest = code;
        for (std::size_t s = 0; s < n; ++s) {
            if (s == agent) continue;
            profile.cpu_of[s] = static_cast<std::size_t>(rest % m);
            rest /= m;
            weight *= sigma[s][profile.cpu_of[s]];
        }
        if (weight == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            profile.cpu_of[agent] = j;
            payoff[j] += weight * profile_objective(profile, game) / game.speed_scale;
        }
    }
    return payoff;
}

DriftReport mean_field_drift(std::span<const SimplexPoint> x, const GameSpec& game, double lambda) {
    game.validate();
    check_strategies(x, game, "mean_field_drift");
    const std::size_t n = game.agent_count();
    const std::size_t m = game.cpu_count();
    const std::uint64_t count = checked_count(n, m, "mean_field_drift");

    std::vector<SimplexPoint> sigma;
    sigma.reserve(n);
    for (const auto& xi : x) sigma.push_back(perturb(xi, lambda));

    // Accumulate E[u 1{alpha_i = j}] and E[u]; the drift is their difference
    // after subtracting E[u] * x_i.
    std::vector<std::vector<double>> reward(n, std::vector<double>(m, 0.0));
    double expected_u = 0.0;
    for (std::uint64_t code = 0; code < count; ++code) {
        const auto profile = profile_from_code(code, n, m);
        double p = 1.0;
        for (std::size_t s = 0; s < n && p != 0.0; ++s) p *= sigma[s][profile[s]];
        if (p == 0.0) continue;
        const double pu = p * profile_objective(profile, game) / game.speed_scale;
        expected_u += pu;
        for (std::size_t i = 0; i < n; ++i) reward[i][profile[i]] += pu;
    }

    DriftReport report;
    report.drift.assign(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            report.drift[i][j] = reward[i][j] - expected_u * x[i][j];
            report.sup_norm = std::max(report.sup_norm, std::abs(report.drift[i][j]));
        }
    }
    return report;
}

bool is_stationary(std::span<const SimplexPoint> x, const GameSpec& game, double lambda, double tol) {
    return mean_field_drift(x, game, lambda).sup_norm <= tol;
}

}  // namespace dynpin
