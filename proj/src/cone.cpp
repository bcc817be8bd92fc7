#include "cforge/cone.hpp"

#include "cforge/errors.hpp"
#include "cforge/linsolve.hpp"

namespace cforge {

std::optional<ConeCertificate> cone_feasible(const std::vector<QVector>& gens, const QVector& x,
                                             const QVector* extra_ray) {
    const std::size_t dim = x.size();
    for (const QVector& g : gens) {
        if (g.size() != dim) {
            throw ContractError("generator dimension mismatch in cone_feasible");
        }
    }
    if (extra_ray != nullptr && extra_ray->size() != dim) {
        throw ContractError("extra ray dimension mismatch in cone_feasible");
    }

    const std::size_t n_real = gens.size() + (extra_ray != nullptr ? 1 : 0);
    const std::size_t m = dim;
    const std::size_t n_total = n_real + m;  // real columns then artificials

    // Tableau rows: [real columns | artificial identity | rhs], with each row
    // sign-flipped if needed so the artificial start basis is feasible.
    std::vector<QVector> t(m, QVector(n_total + 1, Rational(0)));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < gens.size(); ++j) {
            t[r][j] = gens[j][r];
        }
        if (extra_ray != nullptr) {
            t[r][gens.size()] = (*extra_ray)[r];
        }
        t[r][n_real + r] = Rational(1);
        t[r][n_total] = x[r];
        if (t[r][n_total] < 0) {
            for (std::size_t c = 0; c <= n_total; ++c) {
                t[r][c] = -t[r][c];
            }
        }
    }

    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        basis[r] = n_real + r;
    }

    // Phase one: minimize the sum of artificials. Artificials cost 1, real
    // columns cost 0, and artificials never re-enter the basis.
    while (true) {
        // Reduced cost of real column j: 0 - sum over rows with a basic
        // artificial of the column entry.
        std::size_t enter = n_total;
        for (std::size_t j = 0; j < n_real; ++j) {
            Rational reduced = 0;
            for (std::size_t r = 0; r < m; ++r) {
                if (basis[r] >= n_real) {
                    reduced -= t[r][j];
                }
            }
            if (reduced < 0) {
                enter = j;  // Bland: smallest improving index
                break;
            }
        }
        if (enter == n_total) {
            break;  // optimal
        }

        // Min-ratio leaving row; ties go to the smallest basic variable.
        std::size_t leave = m;
        Rational best_ratio = 0;
        for (std::size_t r = 0; r < m; ++r) {
            if (t[r][enter] <= 0) {
                continue;
            }
            const Rational ratio = t[r][n_total] / t[r][enter];
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == m) {
            // Unbounded phase-one objective cannot happen (bounded below by
            // zero); treat defensively as infeasible.
            return std::nullopt;
        }

        const Rational inv = Rational(1) / t[leave][enter];
        for (std::size_t c = 0; c <= n_total; ++c) {
            t[leave][c] *= inv;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || t[r][enter] == 0) {
                continue;
            }
            const Rational f = t[r][enter];
            for (std::size_t c = 0; c <= n_total; ++c) {
                t[r][c] -= f * t[leave][c];
            }
        }
        basis[leave] = enter;
    }

    // Feasible iff every basic artificial sits at zero.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] >= n_real && t[r][n_total] != 0) {
            return std::nullopt;
        }
    }

    ConeCertificate cert;
    cert.coeffs.assign(gens.size(), Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < gens.size()) {
            cert.coeffs[basis[r]] = t[r][n_total];
        } else if (extra_ray != nullptr && basis[r] == gens.size()) {
            cert.extra_coeff = t[r][n_total];
        }
    }
    return cert;
}

std::optional<std::vector<Rational>> in_span(const std::vector<QVector>& vecs, const QVector& x) {
    const std::size_t dim = x.size();
    QMatrix a(dim, vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j) {
        if (vecs[j].size() != dim) {
            throw ContractError("vector dimension mismatch in in_span");
        }
        for (std::size_t r = 0; r < dim; ++r) {
            a.at(r, j) = vecs[j][r];
        }
    }
    const auto sol = solve_linear(a, x);
    if (!sol) {
        return std::nullopt;
    }
    return sol->particular;
}

}  // namespace cforge
