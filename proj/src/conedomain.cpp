#include "cforge/conedomain.hpp"

#include "cforge/errors.hpp"

namespace cforge {

ConeDomain::ConeDomain(std::size_t dim, std::vector<QVector> generators, QVector cap)
    : dim_(dim), generators_(std::move(generators)), cap_(std::move(cap)) {
    if (dim_ == 0) {
        throw ContractError("cone domain dimension must be positive");
    }
    if (cap_.size() != dim_) {
        throw ContractError("cap dimension mismatch");
    }
    if (generators_.empty()) {
        throw ContractError("cone domain needs at least one generator");
    }
    for (const QVector& g : generators_) {
        if (g.size() != dim_) {
            throw ContractError("generator dimension mismatch");
        }
        if (is_zero(g)) {
            throw ContractError("zero generator not allowed");
        }
        if (cap_value(g) < 0) {
            throw ContractError("cap must be nonnegative on every generator");
        }
    }
    // Pointedness: the cone contains no line. Equivalently (for nonzero
    // generators) no -g_i lies back inside the cone.
    for (const QVector& g : generators_) {
        QVector neg = scale(Rational(-1), g);
        if (cone_feasible(generators_, neg)) {
            throw ContractError("generators span a non-pointed cone (contains a line)");
        }
    }
}

Rational ConeDomain::cap_value(const QVector& x) const {
    if (x.size() != dim_) {
        throw ContractError("point dimension mismatch");
    }
    Rational v = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
        v += cap_[i] * x[i];
    }
    return v;
}

bool ConeDomain::in_P(const QVector& x) const {
    if (x.size() != dim_) {
        throw ContractError("point dimension mismatch");
    }
    return cone_feasible(generators_, x).has_value();
}

bool ConeDomain::in_M(const QVector& x) const { return in_P(x) && cap_value(x) <= 1; }

Rational ConeDomain::scale_into_M(const QVector& x) const {
    if (!in_P(x)) {
        throw DomainViolation("scale_into_M: point outside the cone");
    }
    const Rational ell = cap_value(x);
    BigInt n = ell <= 1 ? BigInt(1) : ceil_rational(ell);
    return Rational(1) / Rational(n);
}

bool ConeDomain::tuple_in_domain(const std::vector<QVector>& tuple) const {
    QVector sum = zero_vector(dim_);
    for (const QVector& a : tuple) {
        if (!in_P(a)) {
            return false;
        }
        sum = add(sum, a);
    }
    return in_M(sum);
}

}  // namespace cforge
