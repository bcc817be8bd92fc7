#include "cforge/linsolve.hpp"

#include <algorithm>

#include "cforge/errors.hpp"

namespace cforge {

std::optional<LinearSolution> solve_linear(const QMatrix& a, const QVector& b) {
    if (a.rows != b.size()) {
        throw ContractError("matrix/vector size mismatch in solve_linear");
    }
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;

    // Augmented working copy.
    QMatrix w = a;
    QVector rhs = b;

    std::vector<std::size_t> pivot_col;  // pivot column of each pivot row
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        // First nonzero entry at or below `row` (deterministic pivot choice).
        std::size_t pr = row;
        while (pr < m && w.at(pr, col) == 0) {
            ++pr;
        }
        if (pr == m) {
            continue;
        }
        if (pr != row) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(w.at(pr, c), w.at(row, c));
            }
            std::swap(rhs[pr], rhs[row]);
        }
        const Rational inv = Rational(1) / w.at(row, col);
        for (std::size_t c = 0; c < n; ++c) {
            w.at(row, c) *= inv;
        }
        rhs[row] *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || w.at(r, col) == 0) {
                continue;
            }
            const Rational factor = w.at(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                w.at(r, c) -= factor * w.at(row, c);
            }
            rhs[r] -= factor * rhs[row];
        }
        pivot_col.push_back(col);
        ++row;
    }

    // Zero rows with nonzero right-hand side mean no solution.
    for (std::size_t r = row; r < m; ++r) {
        if (rhs[r] != 0) {
            return std::nullopt;
        }
    }

    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) {
        is_pivot[c] = true;
    }

    LinearSolution sol;
    sol.particular = zero_vector(n);
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
        sol.particular[pivot_col[r]] = rhs[r];
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) {
            continue;
        }
        QVector k = zero_vector(n);
        k[c] = Rational(1);
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            k[pivot_col[r]] = -w.at(r, c);
        }
        sol.kernel.push_back(std::move(k));
    }
    return sol;
}

void EchelonSystem::reduce(std::vector<std::pair<std::size_t, Rational>>& terms,
                           QVector& rhs) const {
    // Kill leading terms against stored pivot rows until the leading unknown
    // has no pivot row (or the row empties out).
    bool changed = true;
    while (changed && !terms.empty()) {
        changed = false;
        const auto it = rows_.find(terms.front().first);
        if (it == rows_.end()) {
            break;
        }
        const Rational factor = terms.front().second;  // pivot coeff is 1
        const Row& prow = it->second;

        // Merge: terms -= factor * prow.terms (both sorted by unknown).
        std::vector<std::pair<std::size_t, Rational>> merged;
        merged.reserve(terms.size() + prow.terms.size());
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < terms.size() || j < prow.terms.size()) {
            if (j == prow.terms.size() ||
                (i < terms.size() && terms[i].first < prow.terms[j].first)) {
                merged.push_back(terms[i]);
                ++i;
            } else if (i == terms.size() || prow.terms[j].first < terms[i].first) {
                merged.emplace_back(prow.terms[j].first, -factor * prow.terms[j].second);
                ++j;
            } else {
                const Rational c = terms[i].second - factor * prow.terms[j].second;
                if (c != 0) {
                    merged.emplace_back(terms[i].first, c);
                }
                ++i;
                ++j;
            }
        }
        terms = std::move(merged);
        for (std::size_t k = 0; k < rhs_dim_; ++k) {
            rhs[k] -= factor * prow.rhs[k];
        }
        changed = true;
    }
}

bool EchelonSystem::add(const std::vector<std::pair<std::size_t, Rational>>& raw_terms,
                        const QVector& rhs_in) {
    if (rhs_in.size() != rhs_dim_) {
        throw ContractError("rhs dimension mismatch in EchelonSystem::add");
    }
    // Sort and combine duplicate unknowns, dropping zero coefficients.
    std::vector<std::pair<std::size_t, Rational>> terms = raw_terms;
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::size_t, Rational>> combined;
    for (const auto& t : terms) {
        if (!combined.empty() && combined.back().first == t.first) {
            combined.back().second += t.second;
        } else {
            combined.push_back(t);
        }
    }
    std::erase_if(combined, [](const auto& t) { return t.second == 0; });

    QVector rhs = rhs_in;
    reduce(combined, rhs);

    if (combined.empty()) {
        // 0 = rhs: consistent only when rhs vanishes.
        return is_zero(rhs);
    }

    // Normalize so the pivot coefficient is 1, then store.
    const Rational inv = Rational(1) / combined.front().second;
    for (auto& t : combined) {
        t.second *= inv;
    }
    for (auto& x : rhs) {
        x *= inv;
    }
    for (const auto& t : combined) {
        seen_[t.first] = true;
    }
    const std::size_t pivot = combined.front().first;
    rows_.emplace(pivot, Row{std::move(combined), std::move(rhs)});
    return true;
}

std::map<std::size_t, QVector> EchelonSystem::solve() const {
    std::map<std::size_t, QVector> values;
    // Free unknowns (and never-seen ones) are zero.
    for (const auto& [idx, _] : seen_) {
        values[idx] = zero_vector(rhs_dim_);
    }
    // Back-substitute from the largest pivot down. Rows are in a map keyed by
    // pivot index; iterate in reverse so every non-pivot term is known.
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
        const Row& row = it->second;
        QVector v = row.rhs;
        for (std::size_t i = 1; i < row.terms.size(); ++i) {
            const QVector& dep = values.at(row.terms[i].first);
            for (std::size_t k = 0; k < rhs_dim_; ++k) {
                v[k] -= row.terms[i].second * dep[k];
            }
        }
        values[it->first] = std::move(v);
    }
    return values;
}

std::size_t EchelonSystem::pivot_count() const { return rows_.size(); }

std::size_t EchelonSystem::free_count() const {
    std::size_t free = 0;
    for (const auto& [idx, _] : seen_) {
        if (rows_.find(idx) == rows_.end()) {
            ++free;
        }
    }
    return free;
}

}  // namespace cforge
