#pragma once

#include <cstdint>

#include "lossfit/normal.hpp"

namespace lossfit {

/// Splittable counter-seeded generator: xoshiro256++ whose state is derived
/// from (seed, stream) through splitmix64. Identical (seed, stream) pairs
/// reproduce identical draws on every platform; distinct streams are
/// statistically independent for simulation purposes.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        for (auto& si : s_) si = splitmix64(x);
        // all-zero state is invalid for xoshiro
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x1ULL;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1): (k + 0.5) * 2^-53, k in [0, 2^53).
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by inverse transform (keeps draws reproducible and
    /// monotone in the underlying uniform).
    double next_normal() { return std_normal_quantile(next_open01()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
};

}  // namespace lossfit
