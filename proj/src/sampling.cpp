#include "cforge/sampling.hpp"

#include <utility>

namespace cforge {

DomainSampler::DomainSampler(const ConeDomain& domain, std::uint64_t max_denominator)
    : domain_(&domain), max_den_(max_denominator == 0 ? 1 : max_denominator), cap_ceiling_(1) {
    for (const QVector& g : domain.generators()) {
        const Rational ell = domain.cap_value(g);
        if (ell > 1) {
            const BigInt c = ceil_rational(ell);
            const std::uint64_t cu = c.convert_to<std::uint64_t>();
            if (cu > cap_ceiling_) {
                cap_ceiling_ = cu;
            }
        }
    }
}

std::vector<QVector> DomainSampler::sample_tuple(SplitMix64& rng, std::size_t n) const {
    const std::vector<QVector>& gens = domain_->generators();
    const std::size_t n_gens = gens.size();
    const std::size_t dim = domain_->dim();

    const std::uint64_t q = rng.uniform_int(1, max_den_);
    // Weight bound keeping the expected total cap value near 1, so the
    // rejection loop below accepts quickly.
    std::uint64_t budget = static_cast<std::uint64_t>(n) * n_gens * cap_ceiling_;
    if (budget == 0) {
        budget = 1;
    }
    std::uint64_t bound = q / budget;
    if (bound == 0) {
        bound = 1;
    }

    std::vector<std::vector<std::uint64_t>> weights(n, std::vector<std::uint64_t>(n_gens, 0));

    for (int attempt = 0; attempt < 200; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t g = 0; g < n_gens; ++g) {
                weights[i][g] = rng.uniform_int(0, bound);
            }
        }
        // Check the total-sum cap; halve the weights until it holds (all-zero
        // weights give the origin, which is always in M).
        while (true) {
            QVector total = zero_vector(dim);
            const Rational inv_q = Rational(1) / Rational(BigInt(q));
            std::vector<QVector> tuple;
            tuple.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                QVector a = zero_vector(dim);
                for (std::size_t g = 0; g < n_gens; ++g) {
                    if (weights[i][g] == 0) {
                        continue;
                    }
                    a = add(a, scale(Rational(BigInt(weights[i][g])) * inv_q, gens[g]));
                }
                total = add(total, a);
                tuple.push_back(std::move(a));
            }
            if (domain_->in_M(total)) {
                return tuple;
            }
            if (attempt < 199) {
                break;  // fresh random draw first
            }
            for (auto& row : weights) {
                for (auto& w : row) {
                    w >>= 1;
                }
            }
        }
    }
    // Unreachable: the final attempt halves until the origin tuple.
    return std::vector<QVector>(n, zero_vector(dim));
}

QVector DomainSampler::sample_point(SplitMix64& rng) const {
    return sample_tuple(rng, 1).front();
}

std::vector<std::size_t> DomainSampler::sample_permutation(SplitMix64& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_int(0, i - 1);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace cforge
