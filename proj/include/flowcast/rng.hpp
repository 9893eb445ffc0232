#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"

namespace flowcast {

namespace detail {

// splitmix64 finalizer; also used to hash (seed, stream) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Deterministic generator: xoshiro256++ seeded through splitmix64.
/// The algorithm is fixed here rather than taken from the platform so that
/// identical seeds give identical streams on every machine and standard
/// library. Single-owner: never share one instance across threads.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Unbiased integer in [0, bound) via mask rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw ArgumentError("SeededRng::below: bound must be positive");
        std::uint64_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t x = next_u64() & mask;
            if (x < bound) return x;
        }
    }

    /// Exponential variate with the given mean (inverse CDF on [0,1)).
    double exponential(double mean) { return -mean * std::log(1.0 - next_double()); }

    /// Independent child generator for sub-stream `stream`; depends only on
    /// the parent's seed, not on how much of the parent was consumed.
    SeededRng derive(std::uint64_t stream) const {
        return SeededRng(detail::mix64(seed_ ^ detail::mix64(stream + 0x51AFF00DULL)));
    }

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

/// Matrix with entries i.i.d. uniform in [-bound, +bound], row-major fill order.
inline Matrix uniform_init(SeededRng& rng, std::size_t rows, std::size_t cols, double bound) {
    if (!(bound > 0.0)) throw ArgumentError("uniform_init: bound must be positive");
    Matrix m(rows, cols);
    double* p = m.data();
    for (std::size_t i = 0; i < m.size(); ++i) p[i] = rng.uniform(-bound, bound);
    return m;
}

}  // namespace flowcast
