#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

// Seeded randomness helpers. Engines are std::mt19937_64 but all value
// mappings are explicit arithmetic on raw engine output, so generated bytes
// do not depend on standard-library distribution internals.

namespace qstr::rng {

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double unit_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n). n must be >= 1.
inline std::size_t index_below(std::mt19937_64& gen, std::size_t n) {
    const auto idx = static_cast<std::size_t>(unit_double(gen) * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

/// Uniform double in [-amplitude, +amplitude].
inline double symmetric_double(std::mt19937_64& gen, double amplitude) {
    return (2.0 * unit_double(gen) - 1.0) * amplitude;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derive a stream seed from a base seed plus stream tags (subject index,
/// class index, restart number, ...). Order-sensitive.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t acc = 0x51a7b2c93d4e5f60ull;
    for (std::uint64_t p : parts) {
        acc = splitmix64(acc ^ p);
    }
    return acc;
}

}  // namespace qstr::rng
