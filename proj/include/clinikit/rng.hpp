#pragma once

// Deterministic randomness. Every randomized operation takes an explicit
// seed; per-record streams are derived from (seed, index) so batch order and
// parallel execution cannot change results. std distributions are avoided
// because their output is implementation-defined; the helpers here are fully
// specified.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace clinikit {

using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent sub-seed for record `index` of a run seeded with `seed`.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    uint64_t state = seed ^ (0xA0761D6478BD642FULL * (index + 1));
    splitmix64(state);
    return splitmix64(state);
}

// Uniform integer in [0, n) without modulo bias.
inline size_t uniform_index(Rng& rng, size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    uint64_t bound = n;
    uint64_t min = (0 - bound) % bound;  // 2^64 mod n
    for (;;) {
        uint64_t r = rng();
        if (r >= min) return static_cast<size_t>(r % bound);
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Samples an index from unnormalized nonnegative weights.
inline size_t sample_categorical(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("sample_categorical: zero total weight");
    double u = uniform_unit(rng) * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

// Fisher-Yates; std::shuffle is not used because its draw sequence is
// unspecified across standard library implementations.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, Rng& rng) {
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = uniform_index(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace clinikit
