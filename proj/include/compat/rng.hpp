#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace compat {

// All randomness flows through std::mt19937 plus the mappings below.
// The standard pins the mt19937 output stream bit-for-bit, but leaves
// uniform_int_distribution and std::shuffle implementation-defined, so
// the bounded-draw and shuffle used for datasets are spelled out here.
inline constexpr const char *kGeneratorName = "mt19937";

inline std::uint32_t draw_u32(std::mt19937 &rng) {
    return static_cast<std::uint32_t>(rng());
}

// Unbiased draw in [0, bound) by rejecting words at or above the largest
// multiple of bound that fits in 2^32.
inline std::uint32_t uniform_below(std::mt19937 &rng, std::uint32_t bound) {
    const std::uint64_t span = std::uint64_t{1} << 32;
    const std::uint64_t limit = span - span % bound;
    std::uint64_t word = draw_u32(rng);
    while (word >= limit) {
        word = draw_u32(rng);
    }
    return static_cast<std::uint32_t>(word % bound);
}

// Inclusive integer range.
inline int uniform_int(std::mt19937 &rng, int lo, int hi) {
    return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint32_t>(hi - lo + 1)));
}

// Uniform in (0, 1]; never returns 0 so it is safe under log().
inline double uniform_unit(std::mt19937 &rng) {
    return (static_cast<double>(draw_u32(rng)) + 1.0) * 0x1p-32;
}

// Box-Muller, cosine branch only; consumes exactly two words per call.
inline double standard_normal(std::mt19937 &rng) {
    const double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Fisher-Yates with the bounded draw above.
template <typename T>
void shuffle_inplace(std::vector<T> &values, std::mt19937 &rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = uniform_below(rng, static_cast<std::uint32_t>(i));
        std::swap(values[i - 1], values[j]);
    }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937 &rng) {
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) {
        indices[i] = i;
    }
    shuffle_inplace(indices, rng);
    return indices;
}

}  // namespace compat
