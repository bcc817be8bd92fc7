#include "cforge/linalg.hpp"

#include "cforge/errors.hpp"

namespace cforge {

QVector zero_vector(std::size_t n) { return QVector(n, Rational(0)); }

QVector add(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) {
        throw ContractError("vector size mismatch in add");
    }
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

QVector sub(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) {
        throw ContractError("vector size mismatch in sub");
    }
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

QVector scale(const Rational& c, const QVector& v) {
    QVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = c * v[i];
    }
    return out;
}

bool is_zero(const QVector& v) {
    for (const Rational& x : v) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

std::string to_string(const QVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += to_string(v[i]);
    }
    out += ")";
    return out;
}

QVector matvec(const QMatrix& m, const QVector& v) {
    if (m.cols != v.size()) {
        throw ContractError("matrix/vector size mismatch in matvec");
    }
    QVector out(m.rows, Rational(0));
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            out[r] += m.at(r, c) * v[c];
        }
    }
    return out;
}

QMatrix add(const QMatrix& a, const QMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw ContractError("matrix size mismatch in add");
    }
    QMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        out.data[i] = a.data[i] + b.data[i];
    }
    return out;
}

QMatrix scale(const Rational& c, const QMatrix& m) {
    QMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        out.data[i] = c * m.data[i];
    }
    return out;
}

bool is_zero(const QMatrix& m) {
    for (const Rational& x : m.data) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace cforge
