#ifndef MAXSPEC_RNG_HPP
#define MAXSPEC_RNG_HPP

#include <cstdint>
#include <limits>

namespace maxspec {

namespace detail {

// SplitMix64 (Steele, Lea, Flood 2014). Used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// xoshiro256++ generator (Blackman & Vigna 2019) with SplitMix64-based
/// seeding, in the style of SplittableRandom: stream k of a root seed starts
/// from `seed + k * 0x9E3779B97F4A7C15` run through SplitMix64. Streams with
/// distinct indices are statistically independent, so replicate r of an
/// experiment always owns `Rng::stream(seed, r)` no matter how the work is
/// scheduled across threads.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

    /// Independent stream `index` derived from `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed + index * 0x9E3779B97F4A7C15ULL);
    }

    /// Deterministic child seed for namespacing unrelated sub-experiments.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
        std::uint64_t s = seed ^ detail::rotl64(tag + 1, 32);
        return detail::splitmix64(s);
    }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double clamped into the open interval (0,1); safe to pass to log().
    double open_unit() {
        double u = uniform01();
        return u > 0.0 ? u : 0x1.0p-53;
    }

    // UniformRandomBitGenerator interface.
    std::uint64_t operator()() { return next_u64(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

private:
    std::uint64_t s_[4];
};

}  // namespace maxspec

#endif
