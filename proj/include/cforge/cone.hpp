#pragma once

#include <optional>
#include <vector>

#include "cforge/linalg.hpp"

namespace cforge {

// Nonnegative combination expressing a point inside a finitely generated
// cone: x = sum(coeffs[i] * gens[i]) + extra_coeff * extra_ray.
struct ConeCertificate {
    std::vector<Rational> coeffs;
    Rational extra_coeff = 0;  // zero when no extra ray was supplied
};

// Decides membership of x in cone(gens) — or cone(gens + {extra_ray}) when
// extra_ray is supplied — by exact phase-one simplex with Bland's rule.
// Returns the (deterministic) certificate on success, nullopt otherwise.
std::optional<ConeCertificate> cone_feasible(const std::vector<QVector>& gens, const QVector& x,
                                             const QVector* extra_ray = nullptr);

// Coefficients expressing x as an unconstrained-linear combination of the
// given vectors, or nullopt when x is outside their span. Free coefficients
// are zero, so the answer is canonical.
std::optional<std::vector<Rational>> in_span(const std::vector<QVector>& vecs, const QVector& x);

}  // namespace cforge
