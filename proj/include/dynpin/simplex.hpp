#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynpin/random.hpp"

namespace dynpin {

/// Tolerance on the unit-sum invariant of a probability vector.
inline constexpr double kSimplexTolerance = 1e-12;

/// A probability distribution over m >= 1 actions.
///
/// Construction validates the invariants (non-negative entries summing to one
/// within kSimplexTolerance), so every live SimplexPoint is a valid strategy.
class SimplexPoint {
  public:
    /// Throws std::invalid_argument when `weights` is not a probability vector.
    explicit SimplexPoint(std::vector<double> weights);

    static SimplexPoint uniform(std::size_t m);
    static SimplexPoint vertex(std::size_t m, std::size_t j);

    /// True iff `w` is non-empty, finite, non-negative and sums to one.
    static bool is_valid(std::span<const double> w) noexcept;

    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t j) const { return weights_[j]; }

    /// Index of the largest weight (lowest index on ties).
    std::size_t argmax() const noexcept;
    double max() const noexcept;

    friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

  private:
    std::vector<double> weights_;
};

/// Euclidean projection onto the probability simplex (sort-based, O(m log m)).
/// Points that are already valid strategies are returned unchanged, so the
/// projection is exactly idempotent.
SimplexPoint project_to_simplex(std::span<const double> v);

/// Uniform mutation: (1 - lambda) * x + lambda / m. Requires 0 <= lambda <= 1.
SimplexPoint perturb(const SimplexPoint& x, double lambda);

/// Draws index j with probability p[j] using one draw from `rng`.
template <class URBG>
std::size_t sample_index(const SimplexPoint& p, URBG& rng) {
    const double u = uniform01(rng);
    const auto w = p.weights();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] <= 0.0) continue;
        cumulative += w[j];
        last_positive = j;
        if (u < cumulative) return j;
    }
    // u landed in the rounding gap above the cumulative sum.
    return last_positive;
}

/// max_i || x_i - e_{profile_i} ||_inf. Throws std::invalid_argument on a
/// size mismatch or an out-of-range action.
double vertex_distance(std::span<const SimplexPoint> x, std::span<const std::size_t> profile);

}  // namespace dynpin
