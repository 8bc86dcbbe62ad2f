#include "dynpin/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dynpin/errors.hpp"
#include "dynpin/random.hpp"

namespace dynpin {

void Platform::validate() const {
    if (capacities.empty()) throw std::invalid_argument("platform: at least one CPU is required");
    if (loads.size() != capacities.size()) {
        throw std::invalid_argument("platform: loads and capacities differ in length");
    }
    for (std::size_t j = 0; j < capacities.size(); ++j) {
        if (!(capacities[j] > 0.0) || !std::isfinite(capacities[j])) {
            throw std::invalid_argument("platform: capacity of CPU " + std::to_string(j + 1) + " must be positive");
        }
        if (!(loads[j] >= 0.0 && loads[j] < 1.0)) {
            throw std::invalid_argument("platform: load of CPU " + std::to_string(j + 1) + " must lie in [0, 1)");
        }
    }
}

void ThreadSpec::validate() const {
    if (!(demand > 0.0) || !std::isfinite(demand)) throw std::invalid_argument("thread: demand must be positive");
    if (!(total_work > 0.0)) throw std::invalid_argument("thread: total_work must be positive");
}

std::string to_string(const AssignmentProfile& profile) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (i) out << ", ";
        out << profile[i] + 1;
    }
    out << ')';
    return out.str();
}

void GameSpec::validate() const {
    platform.validate();
    if (demands.empty()) throw std::invalid_argument("game: at least one agent is required");
    for (double d : demands) {
        if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("game: demands must be positive");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("game: gamma must be >= 0");
    if (!(speed_scale > 0.0) || !std::isfinite(speed_scale)) {
        throw std::invalid_argument("game: speed_scale must be positive");
    }
}

// ── Profile enumeration ─────────────────────────────────────────────

std::optional<std::uint64_t> profile_count(std::size_t agents, std::size_t cpus, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < agents; ++i) {
        if (cpus != 0 && count > cap / cpus) return std::nullopt;
        count *= cpus;
    }
    if (count > cap) return std::nullopt;
    return count;
}

std::uint64_t profile_code(const AssignmentProfile& profile, std::size_t cpus) {
    std::uint64_t code = 0;
    for (std::size_t i = profile.size(); i-- > 0;) code = code * cpus + profile[i];
    return code;
}

AssignmentProfile profile_from_code(std::uint64_t code, std::size_t agents, std::size_t cpus) {
    AssignmentProfile profile{std::vector<std::size_t>(agents)};
    for (std::size_t i = 0; i < agents; ++i) {
        profile.cpu_of[i] = static_cast<std::size_t>(code % cpus);
        code /= cpus;
    }
    return profile;
}

// ── Speed model and objective ───────────────────────────────────────

std::vector<double> speeds(const AssignmentProfile& profile, const GameSpec& game) {
    const std::size_t m = game.cpu_count();
    if (profile.size() != game.agent_count()) {
        throw std::invalid_argument("speeds: profile has " + std::to_string(profile.size()) + " threads, game has " +
                                    std::to_string(game.agent_count()));
    }
    std::vector<double> resident(m, 0.0);
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i] >= m) throw std::invalid_argument("speeds: CPU index out of range in " + to_string(profile));
        resident[profile[i]] += game.demands[i];
    }
    std::vector<double> v(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const std::size_t j = profile[i];
        v[i] = game.demands[i] * std::min(1.0, game.platform.available(j) / resident[j]);
    }
    return v;
}

double objective_value(std::span<const double> v, double gamma) {
    if (v.empty()) throw std::invalid_argument("objective_value: empty speed vector");
    if (!(gamma >= 0.0)) throw std::invalid_argument("objective_value: gamma must be >= 0");
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / n;
    if (gamma == 0.0) return mean;
    double penalty = 0.0;
    for (double x : v) penalty += (x - mean) * (x - mean);
    return (sum - gamma * penalty) / n;
}

double profile_objective(const AssignmentProfile& profile, const GameSpec& game) {
    return objective_value(speeds(profile, game), game.gamma);
}

std::vector<double> utilities(const AssignmentProfile& profile, const GameSpec& game) {
    const double u = profile_objective(profile, game) / game.speed_scale;
    if (!(u > 0.0 && u <= 1.0)) {
        std::ostringstream msg;
        msg << "utility " << u << " of profile " << to_string(profile) << " is outside (0, 1]";
        throw ConfigError(msg.str());
    }
    return std::vector<double>(profile.size(), u);
}

// ── Validation ──────────────────────────────────────────────────────

namespace {

struct Scan {
    GameValidation result;
    bool first = true;

    void visit(const AssignmentProfile& profile, const GameSpec& game) {
        const double f = profile_objective(profile, game);
        ++result.profiles_checked;
        if (first || f > result.f_max) {
            result.f_max = f;
            result.argmax_profile = profile;
        }
        if (first || f < result.f_min) result.f_min = f;
        first = false;
        if (!result.witness && !(f > 0.0)) {
            result.witness = profile;
            std::ostringstream msg;
            msg << "objective " << f << " <= 0 at profile " << to_string(profile);
            result.diagnostics = msg.str();
        }
    }
};

}  // namespace

GameValidation validate_game(const GameSpec& game) {
    game.validate();
    const std::size_t n = game.agent_count();
    const std::size_t m = game.cpu_count();

    Scan scan;
    if (const auto count = profile_count(n, m, kExhaustiveProfileLimit)) {
        scan.result.exhaustive = true;
        for (std::uint64_t code = 0; code < *count; ++code) scan.visit(profile_from_code(code, n, m), game);
    } else {
        RandomStream rng(0x5eedULL);
        AssignmentProfile profile{std::vector<std::size_t>(n)};
        for (std::size_t s = 0; s < kValidationSamples; ++s) {
            for (auto& cpu : profile.cpu_of) cpu = static_cast<std::size_t>(rng() % m);
            scan.visit(profile, game);
        }
        scan.result.caveat = "game has more than " + std::to_string(kExhaustiveProfileLimit) + " profiles; checked " +
                             std::to_string(kValidationSamples) + " random profiles only";
    }

    GameValidation result = std::move(scan.result);
    if (!result.witness && result.f_max > game.speed_scale) {
        result.witness = result.argmax_profile;
        std::ostringstream msg;
        msg << "speed_scale " << game.speed_scale << " is below the maximum objective " << result.f_max
            << " at profile " << to_string(result.argmax_profile);
        result.diagnostics = msg.str();
    }
    result.ok = !result.witness.has_value();
    return result;
}

}  // namespace dynpin
