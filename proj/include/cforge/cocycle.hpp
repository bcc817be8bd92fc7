#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "cforge/conedomain.hpp"
#include "cforge/linalg.hpp"
#include "cforge/parallel.hpp"
#include "cforge/report.hpp"

namespace cforge {

// Symmetric binary cocycle candidate: a pure evaluator f(a, b) on pairs of
// cone points with a + b in M, valued in Q^out_dim. Symmetry and the cocycle
// law
//     f(a, b + c) + f(b, c) = f(a + b, c) + f(a, b)
// are checked (check_cocycle2), never assumed, so deliberately broken
// evaluators can flow through the same interface in fault tests.
class Cocycle2 {
public:
    virtual ~Cocycle2() = default;
    virtual std::size_t in_dim() const = 0;
    virtual std::size_t out_dim() const = 0;
    virtual QVector eval(const QVector& a, const QVector& b) const = 0;
};

using CocyclePtr = std::shared_ptr<const Cocycle2>;

// f(a,b)_k = a^T F_k b for one square matrix F_k per output coordinate.
// Symmetric matrices give symmetric cocycles; asymmetric ones are accepted
// so the validators have something to reject.
class BilinearCocycle : public Cocycle2 {
public:
    BilinearCocycle(std::size_t dim, std::vector<QMatrix> forms);
    std::size_t in_dim() const override { return dim_; }
    std::size_t out_dim() const override { return forms_.size(); }
    QVector eval(const QVector& a, const QVector& b) const override;
    const std::vector<QMatrix>& forms() const { return forms_; }

private:
    std::size_t dim_;
    std::vector<QMatrix> forms_;
};

// Polynomial potential phi: Q^dim -> Q^out_dim given per output coordinate
// as a rational-linear combination of monomials prod x_i^k (the expression
// dictionary: powers up to 4 and cross products x_i x_j cover every
// generated instance; arbitrary products of powers are accepted).
struct PotentialTerm {
    Rational coeff;
    // (variable index, power >= 1); empty list = constant term
    std::vector<std::pair<std::size_t, std::uint32_t>> factors;
};

class Potential {
public:
    Potential(std::size_t in_dim, std::size_t out_dim,
              std::vector<std::vector<PotentialTerm>> coord_terms);
    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    QVector eval(const QVector& x) const;
    const std::vector<std::vector<PotentialTerm>>& coord_terms() const { return coord_terms_; }

private:
    std::size_t in_dim_;
    std::size_t out_dim_;
    std::vector<std::vector<PotentialTerm>> coord_terms_;
};

// f(a,b) = phi(a+b) - phi(a) - phi(b): a genuine symmetric cocycle for any
// phi, with the known potential as a gauge reference for tests.
class PotentialCocycle : public Cocycle2 {
public:
    explicit PotentialCocycle(Potential phi) : phi_(std::move(phi)) {}
    std::size_t in_dim() const override { return phi_.in_dim(); }
    std::size_t out_dim() const override { return phi_.out_dim(); }
    QVector eval(const QVector& a, const QVector& b) const override;
    const Potential& potential() const { return phi_; }

private:
    Potential phi_;
};

// f(a,b) = base(a,b) + z: shifts the offset f(0,0) without breaking the
// cocycle law.
class ShiftCocycle : public Cocycle2 {
public:
    ShiftCocycle(CocyclePtr base, QVector shift);
    std::size_t in_dim() const override { return base_->in_dim(); }
    std::size_t out_dim() const override { return base_->out_dim(); }
    QVector eval(const QVector& a, const QVector& b) const override;
    const CocyclePtr& base() const { return base_; }
    const QVector& shift() const { return shift_; }

private:
    CocyclePtr base_;
    QVector shift_;
};

// Rational-linear combination sum(coeff_i * f_i) of cocycles on one domain.
class SumCocycle : public Cocycle2 {
public:
    explicit SumCocycle(std::vector<std::pair<Rational, CocyclePtr>> terms);
    std::size_t in_dim() const override { return terms_.front().second->in_dim(); }
    std::size_t out_dim() const override { return terms_.front().second->out_dim(); }
    QVector eval(const QVector& a, const QVector& b) const override;
    const std::vector<std::pair<Rational, CocyclePtr>>& terms() const { return terms_; }

private:
    std::vector<std::pair<Rational, CocyclePtr>> terms_;
};

// Arity-generic extension of a binary cocycle by the left fold
//     F(a_1, ..., a_n) = F(a_1 + a_2, a_3, ..., a_n) + f(a_1, a_2),
// with F(a) = 0 for a single argument.
class CocycleN {
public:
    explicit CocycleN(CocyclePtr f);
    QVector eval(const std::vector<QVector>& tuple) const;
    // Same, but rejects tuples outside the domain of definition.
    QVector eval_checked(const ConeDomain& domain, const std::vector<QVector>& tuple) const;
    const CocyclePtr& base() const { return f_; }

private:
    CocyclePtr f_;
};

CocycleN extend_nary(CocyclePtr f);

// z := f(0, 0), the constant with f(0 : n) = (n-1) z.
QVector cocycle_offset(const Cocycle2& f);

// (f - z, z): the shifted cocycle has offset zero. Returns f itself when
// the offset already vanishes, so the operation is idempotent.
std::pair<CocyclePtr, QVector> normalize(CocyclePtr f);

// Law checkers. All sample seeded pseudorandom in-domain points with
// denominators bounded by max_denominator and compare exactly; reports
// carry the first counterexample. Serial and parallel modes return
// identical findings.
Report check_cocycle2(const CocyclePtr& f, const ConeDomain& domain, std::size_t samples,
                      std::uint64_t seed, std::uint64_t max_denominator = 60,
                      ExecMode mode = ExecMode::parallel);

Report check_symmetry_nary(const CocycleN& fn, const ConeDomain& domain, std::size_t arity,
                           std::size_t samples, std::uint64_t seed,
                           std::uint64_t max_denominator = 60,
                           ExecMode mode = ExecMode::parallel);

Report check_grouping(const CocycleN& fn, const ConeDomain& domain,
                      const std::vector<std::size_t>& shape, std::size_t samples,
                      std::uint64_t seed, std::uint64_t max_denominator = 60,
                      ExecMode mode = ExecMode::parallel);

Report check_offset_laws(const CocyclePtr& f, const ConeDomain& domain, std::size_t n_max,
                         std::size_t samples, std::uint64_t seed,
                         std::uint64_t max_denominator = 60, ExecMode mode = ExecMode::parallel);

}  // namespace cforge
