#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace dynpin {

/// SplitMix64. Small-state generator used for per-agent sub-streams.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

/// Caller-owned random stream. Every draw advances it deterministically;
/// never share one instance between concurrent callers.
class RandomStream {
  public:
    using result_type = std::mt19937_64::result_type;

    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() noexcept { return std::mt19937_64::min(); }
    static constexpr result_type max() noexcept { return std::mt19937_64::max(); }

    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) built from the top 53 bits of one draw.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw (Box-Muller, one draw per call, portable across
    /// standard libraries unlike std::normal_distribution).
    double normal(double mean, double sd);

    /// Independent child stream for `key`; consumes one draw from this stream.
    /// Children are seeded by hashing (parent draw, key), so distinct keys give
    /// non-overlapping sequences for any realistic run length.
    SplitMix64 split(std::uint64_t key);

  private:
    std::mt19937_64 engine_;
};

/// Uniform double in [0, 1) from any 64-bit generator.
template <class URBG>
double uniform01(URBG& rng) {
    static_assert(URBG::max() == std::numeric_limits<std::uint64_t>::max() && URBG::min() == 0,
                  "uniform01 expects a full-range 64-bit generator");
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace dynpin
