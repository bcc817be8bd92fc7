#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cforge/linalg.hpp"

namespace cforge {

// Solution set of A x = b: one particular solution plus a basis of the
// kernel of A. Empty optional means the system is inconsistent.
struct LinearSolution {
    QVector particular;           // free variables set to zero
    std::vector<QVector> kernel;  // one basis vector per free column
};

// Exact Gauss-Jordan elimination. Pivots on the first nonzero entry in each
// column, which makes the particular solution and kernel basis canonical for
// a given (A, b).
std::optional<LinearSolution> solve_linear(const QMatrix& a, const QVector& b);

// Incremental exact row-echelon accumulator for sparse linear equations in
// named unknowns, with vector-valued right-hand sides. Rows are reduced
// against existing pivot rows as they arrive; an inconsistent row is rejected
// without mutating the stored system, so callers can probe with optional
// equations.
class EchelonSystem {
public:
    // rhs_dim: dimension of every right-hand side vector.
    explicit EchelonSystem(std::size_t rhs_dim) : rhs_dim_(rhs_dim) {}

    // One linear equation sum(coeff * unknown) = rhs. Unknown indices are
    // arbitrary (need not be dense). Returns false — and leaves the system
    // unchanged — when the equation contradicts the rows already stored.
    bool add(const std::vector<std::pair<std::size_t, Rational>>& terms, const QVector& rhs);

    // Value assigned to each unknown after back-substitution, with every free
    // unknown set to the zero vector. Unknowns the system has never seen are
    // absent from the map; callers treat absence as zero.
    std::map<std::size_t, QVector> solve() const;

    // Number of unknowns that appeared in some equation but are not pivots.
    std::size_t free_count() const;

    // Number of pivot rows currently stored (the system's rank).
    std::size_t pivot_count() const;

    std::size_t rhs_dim() const { return rhs_dim_; }

private:
    struct Row {
        // Sorted by unknown index; first entry is the pivot with coefficient 1.
        std::vector<std::pair<std::size_t, Rational>> terms;
        QVector rhs;
    };

    // Reduces (terms, rhs) in place against the stored pivot rows.
    void reduce(std::vector<std::pair<std::size_t, Rational>>& terms, QVector& rhs) const;

    std::size_t rhs_dim_;
    std::map<std::size_t, Row> rows_;   // keyed by pivot unknown
    std::map<std::size_t, bool> seen_;  // every unknown that appeared
};

}  // namespace cforge
