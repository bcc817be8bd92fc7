#include "cforge/rng.hpp"

namespace cforge {

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;  // callers keep lo <= hi
    return lo + next() % span;
}

Rational SplitMix64::rational01(std::uint64_t max_den) {
    const std::uint64_t q = uniform_int(1, max_den);
    const std::uint64_t p = uniform_int(0, q);
    return Rational(BigInt(p)) / Rational(BigInt(q));
}

}  // namespace cforge
