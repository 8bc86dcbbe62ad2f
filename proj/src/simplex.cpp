#include "dynpin/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dynpin {

// ── RandomStream ────────────────────────────────────────────────────

double RandomStream::normal(double mean, double sd) {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + sd * z;
}

SplitMix64 RandomStream::split(std::uint64_t key) {
    SplitMix64 key_hash(key);
    SplitMix64 seed_hash(engine_() ^ key_hash());
    return SplitMix64(seed_hash());
}

// ── SimplexPoint ────────────────────────────────────────────────────

bool SimplexPoint::is_valid(std::span<const double> w) noexcept {
    if (w.empty()) return false;
    double sum = 0.0;
    for (double x : w) {
        if (!std::isfinite(x) || x < 0.0) return false;
        sum += x;
    }
    return std::abs(sum - 1.0) <= kSimplexTolerance;
}

SimplexPoint::SimplexPoint(std::vector<double> weights) : weights_(std::move(weights)) {
    if (!is_valid(weights_)) {
        throw std::invalid_argument("SimplexPoint: weights must be non-negative, finite and sum to 1");
    }
}

SimplexPoint SimplexPoint::uniform(std::size_t m) {
    if (m == 0) throw std::invalid_argument("SimplexPoint::uniform: m must be >= 1");
    return SimplexPoint(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

SimplexPoint SimplexPoint::vertex(std::size_t m, std::size_t j) {
    if (j >= m) throw std::invalid_argument("SimplexPoint::vertex: index out of range");
    std::vector<double> w(m, 0.0);
    w[j] = 1.0;
    return SimplexPoint(std::move(w));
}

std::size_t SimplexPoint::argmax() const noexcept {
    return static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
}

double SimplexPoint::max() const noexcept { return weights_[argmax()]; }

// ── Projection ──────────────────────────────────────────────────────

SimplexPoint project_to_simplex(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("project_to_simplex: empty vector");
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument("project_to_simplex: non-finite entry");
    }
    if (SimplexPoint::is_valid(v)) return SimplexPoint(std::vector<double>(v.begin(), v.end()));

    // Threshold theta such that sum_j max(v_j - theta, 0) = 1.
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumsum += sorted[j];
        const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }

    std::vector<double> w(v.size());
    std::transform(v.begin(), v.end(), w.begin(), [theta](double x) { return std::max(x - theta, 0.0); });

    // Rounding can leave the sum a few ulps off.
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        for (double& x : w) x /= sum;
    }
    return SimplexPoint(std::move(w));
}

SimplexPoint perturb(const SimplexPoint& x, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("perturb: lambda must lie in [0, 1], got " + std::to_string(lambda));
    }
    if (lambda == 0.0) return x;
    const double m = static_cast<double>(x.size());
    std::vector<double> sigma(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) sigma[j] = (1.0 - lambda) * x[j] + lambda / m;
    return SimplexPoint(std::move(sigma));
}

double vertex_distance(std::span<const SimplexPoint> x, std::span<const std::size_t> profile) {
    if (x.size() != profile.size()) {
        throw std::invalid_argument("vertex_distance: strategy profile has " + std::to_string(x.size()) +
                                    " agents, pure profile has " + std::to_string(profile.size()));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto w = x[i].weights();
        if (profile[i] >= w.size()) {
            throw std::invalid_argument("vertex_distance: action " + std::to_string(profile[i]) +
                                        " out of range for agent " + std::to_string(i));
        }
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double target = (j == profile[i]) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(w[j] - target));
        }
    }
    return worst;
}

}  // namespace dynpin
