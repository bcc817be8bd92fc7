#pragma once

#include <cstdint>
#include <vector>

#include "cforge/conedomain.hpp"
#include "cforge/rng.hpp"

namespace cforge {

// Seeded generator of in-domain test points: tuples (a_1, ..., a_n) of cone
// points whose sum lies in M, built as small nonnegative integer generator
// combinations over a common denominator. Deterministic for a given RNG
// state; never fails (falls back to halving the weights, and 0 is in M).
class DomainSampler {
public:
    DomainSampler(const ConeDomain& domain, std::uint64_t max_denominator);

    // n points of P whose sum lies in M.
    std::vector<QVector> sample_tuple(SplitMix64& rng, std::size_t n) const;

    // Single point of M.
    QVector sample_point(SplitMix64& rng) const;

    // Uniformly shuffled index permutation of size n (Fisher-Yates).
    static std::vector<std::size_t> sample_permutation(SplitMix64& rng, std::size_t n);

    const ConeDomain& domain() const { return *domain_; }

private:
    const ConeDomain* domain_;
    std::uint64_t max_den_;
    std::uint64_t cap_ceiling_;  // max over generators of ceil(cap value), >= 1
};

}  // namespace cforge
