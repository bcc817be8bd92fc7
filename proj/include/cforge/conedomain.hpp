#pragma once

#include <cstddef>
#include <vector>

#include "cforge/cone.hpp"
#include "cforge/linalg.hpp"

namespace cforge {

// The pair (P, M): a pointed convex cone P = cone(generators) in Q^d
// together with the capped subset M = {x in P : cap . x <= 1}. A zero cap
// means M = P. M is hereditary (a, b in P with a+b in M forces a, b in M)
// and generates P via integer scaling, which is exactly what the extension
// machinery needs.
class ConeDomain {
public:
    // Validates: positive dimension, nonzero generators of matching
    // dimension, cap nonnegative on every generator, and pointedness
    // (no nonzero nonnegative combination of generators vanishes).
    ConeDomain(std::size_t dim, std::vector<QVector> generators, QVector cap);

    std::size_t dim() const { return dim_; }
    const std::vector<QVector>& generators() const { return generators_; }
    const QVector& cap() const { return cap_; }

    // Value of the cap functional at x.
    Rational cap_value(const QVector& x) const;

    bool in_P(const QVector& x) const;
    bool in_M(const QVector& x) const;

    // Smallest alpha = 1/n (n a positive integer) with alpha * x in M.
    // Requires x in P.
    Rational scale_into_M(const QVector& x) const;

    // True when every entry lies in P and the total sum lies in M. This is
    // the domain of the n-ary extension; with a linear cap it is closed
    // under permutations and under merging adjacent entries.
    bool tuple_in_domain(const std::vector<QVector>& tuple) const;

private:
    std::size_t dim_;
    std::vector<QVector> generators_;
    QVector cap_;
};

}  // namespace cforge
