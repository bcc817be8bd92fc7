#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cforge/linalg.hpp"
#include "cforge/parallel.hpp"
#include "cforge/report.hpp"

namespace cforge {

// Finite probability space with exact rational atom masses. The prime basis
// is the sorted list of primes dividing any positive atom probability's
// numerator or denominator; log-prime coordinates live over it.
class FiniteSpace {
public:
    explicit FiniteSpace(std::vector<Rational> atom_probs);

    std::size_t atom_count() const { return probs_.size(); }
    const std::vector<Rational>& probs() const { return probs_; }
    const std::vector<BigInt>& prime_basis() const { return basis_; }

    // Measure of the subset encoded as an atom-index bitmask.
    Rational measure(std::uint32_t mask) const;

    // Exponent vector of 1/p over the prime basis — the coordinates of
    // log(1/p) in the span of the basis prime logs. p must factor over the
    // basis.
    std::vector<BigInt> log_coords(const Rational& p) const;

    // True when log_coords(p) is defined, i.e. p > 0 factors over the basis.
    // Subset measures can leave the basis (1/4 + 1/4 + 1/4 = 3/4 brings in
    // the prime 3), so set-level searches must be able to test this.
    bool factors_over_basis(const Rational& p) const;

private:
    std::vector<Rational> probs_;
    std::vector<BigInt> basis_;
};

// Partition of the atom set into disjoint nonempty covering blocks, stored
// as bitmasks ordered by smallest contained atom (canonical form).
class Partition {
public:
    Partition(std::size_t atom_count, const std::vector<std::vector<std::size_t>>& blocks);
    Partition(std::size_t atom_count, std::vector<std::uint32_t> block_masks);

    std::size_t atom_count() const { return atom_count_; }
    const std::vector<std::uint32_t>& blocks() const { return blocks_; }
    std::vector<std::vector<std::size_t>> block_indices() const;

    bool operator==(const Partition& other) const = default;

private:
    void canonicalize_and_validate();

    std::size_t atom_count_ = 0;
    std::vector<std::uint32_t> blocks_;
};

// Common refinement: all nonempty pairwise intersections.
Partition join(const Partition& a, const Partition& b);

// Exact product test P(A_i ∩ B_j) = P(A_i) P(B_j) for all blocks.
bool independent(const FiniteSpace& space, const Partition& a, const Partition& b);

// Finitely additive set function valued in Q^out_dim, determined by one
// matrix (out_dim x |prime basis|) per atom; the matrix acts on log-prime
// coordinates. Atoms of probability zero must carry the zero matrix.
class AtomSetFunction {
public:
    AtomSetFunction(const FiniteSpace& space, std::size_t out_dim,
                    std::vector<QMatrix> atom_matrices);

    std::size_t out_dim() const { return out_dim_; }
    const std::vector<QMatrix>& atom_matrices() const { return matrices_; }

    QMatrix set_matrix(std::uint32_t mask) const;
    // m(mask) applied to a log-coordinate vector.
    QVector apply(std::uint32_t mask, const std::vector<BigInt>& coords) const;

private:
    std::size_t out_dim_;
    std::vector<QMatrix> matrices_;
};

// L_m(A) = sum over blocks of m(block)(log 1/P(block)), null blocks skipped.
QVector eval_Lm(const FiniteSpace& space, const AtomSetFunction& m, const Partition& a);

// sum P(block) * log_coords(P(block)): rational coefficients over the prime
// basis (the entropy value written in log-prime coordinates).
QVector shannon_H(const FiniteSpace& space, const Partition& a);

// Requires independent(a, b); asserts L_m(join) = L_m(a) + L_m(b) exactly.
Report check_additivity(const FiniteSpace& space, const AtomSetFunction& m, const Partition& a,
                        const Partition& b);

// T with matrix(atom) = prob(atom) * T for every atom, when it exists.
std::optional<QMatrix> is_measure_multiple(const FiniteSpace& space, const AtomSetFunction& m);

// Exhaustive search (<= 10 atoms) for two partitions with equal block-measure
// multisets but different L_m values, in deterministic enumeration order.
// Absent whenever m is a measure multiple.
std::optional<std::pair<Partition, Partition>> atom_measure_dependence_witness(
    const FiniteSpace& space, const AtomSetFunction& m, ExecMode mode = ExecMode::parallel);

// All set partitions of {0..n-1} as block-mask lists, enumerated via
// restricted growth strings (deterministic order).
std::vector<std::vector<std::uint32_t>> set_partitions(std::size_t n);

// Difference-function interface: defined on ordered pairs of equal-measure
// atom subsets. Implementations must be pure. Expected laws (verified on
// samples by recover_m, then exhaustively through its postconditions):
// chain rule, additivity over disjoint unions, and invariance under
// null-set modifications.
class DeltaEvaluator {
public:
    virtual ~DeltaEvaluator() = default;
    virtual std::size_t out_dim() const = 0;
    virtual QVector eval(std::uint32_t v_mask, std::uint32_t w_mask) const = 0;
};

// Delta built from a known additive ground truth given by one vector per
// atom (zero on null atoms): Delta(V, W) = g(W) - g(V) with g(V) the sum of
// the atom vectors in V.
class FixtureDelta : public DeltaEvaluator {
public:
    FixtureDelta(const FiniteSpace& space, std::size_t out_dim,
                 std::vector<QVector> atom_values);
    std::size_t out_dim() const override { return out_dim_; }
    QVector eval(std::uint32_t v_mask, std::uint32_t w_mask) const override;

    // Ground-truth set values by mask (for gauge analysis in tests).
    const std::vector<QVector>& set_values() const { return set_values_; }

private:
    std::size_t out_dim_;
    std::vector<QVector> set_values_;  // indexed by mask
};

// Identically-zero difference function.
class ZeroDelta : public DeltaEvaluator {
public:
    ZeroDelta(std::size_t out_dim) : out_dim_(out_dim) {}
    std::size_t out_dim() const override { return out_dim_; }
    QVector eval(std::uint32_t, std::uint32_t) const override {
        return QVector(out_dim_, Rational(0));
    }

private:
    std::size_t out_dim_;
};

// Table-backed Delta: explicit values for ordered pairs, with the reversed
// pair looked up as the negation. Missing pairs are contract violations.
class TableDelta : public DeltaEvaluator {
public:
    TableDelta(std::size_t out_dim,
               std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, QVector>> entries);
    std::size_t out_dim() const override { return out_dim_; }
    QVector eval(std::uint32_t v_mask, std::uint32_t w_mask) const override;

private:
    std::size_t out_dim_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, QVector> table_;
};

// Raised when the difference function fails its contract or the derived
// structures are inconsistent; carries the witness.
class RecoverFailure : public std::runtime_error {
public:
    explicit RecoverFailure(const std::string& what) : std::runtime_error(what) {}
};

struct RecoverOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 200;  // sample budget for the Delta contract checks
    ExecMode mode = ExecMode::parallel;
};

struct RecoverResult {
    std::size_t out_dim = 0;
    std::vector<QVector> set_values;  // m(V), indexed by subset mask
};

// Constructive recovery of a finitely additive set function m from a
// difference function: reference sets of each achievable measure, the
// measure-level cocycle, its potential via the one-dimensional cone solver,
// and m(V) = m1(V) - h(P(V)). Postconditions (checked exhaustively): m
// vanishes on null sets, is additive on all disjoint pairs, and satisfies
// Delta(V, W) = m(W) - m(V) on all equal-measure pairs.
RecoverResult recover_m(const FiniteSpace& space, const DeltaEvaluator& delta,
                        const RecoverOptions& options = {});

}  // namespace cforge
