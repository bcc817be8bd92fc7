#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cforge/rational.hpp"

namespace cforge {

// Dense exact vector over the rationals.
using QVector = std::vector<Rational>;

QVector zero_vector(std::size_t n);
QVector add(const QVector& a, const QVector& b);
QVector sub(const QVector& a, const QVector& b);
QVector scale(const Rational& c, const QVector& v);
bool is_zero(const QVector& v);
std::string to_string(const QVector& v);

// Dense exact matrix, row-major.
struct QMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> data;  // rows * cols entries

    QMatrix() = default;
    QMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Rational(0)) {}

    Rational& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool operator==(const QMatrix& other) const = default;
};

QVector matvec(const QMatrix& m, const QVector& v);
QMatrix add(const QMatrix& a, const QMatrix& b);
QMatrix scale(const Rational& c, const QMatrix& m);
bool is_zero(const QMatrix& m);

}  // namespace cforge
