#pragma once

#include <cstdint>

#include "cforge/rational.hpp"

namespace cforge {

// SplitMix64 pseudorandom generator. Chosen because the algorithm is a
// five-line public-domain recurrence that is trivial to reproduce in any
// language, so seeded counterexamples stay portable:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    // Uniform in [lo, hi] inclusive, by modulo reduction (documented bias is
    // negligible for the tiny ranges used here and keeps the algorithm
    // one-line portable).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    // Uniform-ish rational in [0, 1]: q in [1, max_den], then p in [0, q].
    Rational rational01(std::uint64_t max_den);

private:
    std::uint64_t state_;
};

}  // namespace cforge
