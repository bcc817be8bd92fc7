#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

namespace cforge {

using BigInt = boost::multiprecision::mpz_int;

// Exact rational scalar. GMP keeps values in lowest terms with a positive
// denominator as long as they are built through arithmetic; parse_rational
// below guarantees that for values entering from text.
using Rational = boost::multiprecision::mpq_rational;

// Canonical text form: "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Accepts "p" or "p/q" with an optional leading sign on p. Rejects a zero
// denominator and any other malformed text. The result is in lowest terms.
Rational parse_rational(const std::string& text);

// Smallest integer >= r.
BigInt ceil_rational(const Rational& r);

bool is_integer(const Rational& r);

// True when q * r has an integer value (used for grid alignment tests).
bool is_integer_multiple(const Rational& r, const BigInt& q);

}  // namespace cforge
