#pragma once

#include <cstdint>

namespace matchlab {

// Random streams are fully specified so they can be reproduced in any
// language:
//
//   mix64(z)           SplitMix64 finalizer:
//                        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                        z =  z ^ (z >> 31)
//   trial_seed(s, i)   mix64(s + 0x9E3779B97F4A7C15 * (i + 1))
//   Rng(seed)          xoshiro256** whose four state words are the first four
//                      outputs of SplitMix64 started at `seed`.
//   bernoulli(t)       (next() >> 11) < t, where t = threshold(p) = floor(p * 2^53)
//                      (p = 1 maps to 2^53, i.e. always true).
//   bounded(n)         high 64 bits of the 128-bit product next() * n.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master + kGolden * (index + 1));
}

/// SplitMix64 sequence generator (used for seeding).
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna).
class Rng {
public:
    explicit constexpr Rng(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t bounded(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    bool bernoulli(std::uint64_t threshold) noexcept { return (next() >> 11) < threshold; }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

/// Bernoulli threshold for probability p in [0, 1]; see bernoulli().
inline std::uint64_t bernoulli_threshold(double p) noexcept {
    if (!(p > 0.0)) return 0;
    if (p >= 1.0) return std::uint64_t{1} << 53;
    return static_cast<std::uint64_t>(p * 0x1.0p53);
}

} // namespace matchlab
