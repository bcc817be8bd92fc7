#include "cforge/rational.hpp"

#include <cctype>
#include <cstddef>

#include "cforge/errors.hpp"

namespace cforge {

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) {
        return numerator(r).str();
    }
    return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

// Parses a decimal integer with an optional leading sign. Returns false on
// empty or non-digit input.
bool parse_integer(const std::string& text, BigInt& out) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i >= text.size()) {
        return false;
    }
    for (std::size_t j = i; j < text.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
            return false;
        }
    }
    // GMP's string constructor rejects a leading '+', so the sign is applied
    // here after parsing the digits.
    out = BigInt(text.substr(i));
    if (negative) {
        out = -out;
    }
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const std::size_t slash = text.find('/');
    if (slash == std::string::npos) {
        BigInt num;
        if (!parse_integer(text, num)) {
            throw ContractError("not a rational number: '" + text + "'");
        }
        return Rational(num);
    }
    BigInt num;
    BigInt den;
    if (!parse_integer(text.substr(0, slash), num) ||
        !parse_integer(text.substr(slash + 1), den)) {
        throw ContractError("not a rational number: '" + text + "'");
    }
    if (den < 0) {
        throw ContractError("denominator must be positive in '" + text + "'");
    }
    if (den == 0) {
        throw ContractError("zero denominator in '" + text + "'");
    }
    // Division canonicalizes (lowest terms, positive denominator).
    return Rational(num) / Rational(den);
}

BigInt ceil_rational(const Rational& r) {
    const BigInt num = numerator(r);
    const BigInt den = denominator(r);  // positive for canonical rationals
    BigInt q = num / den;               // truncates toward zero
    if (q * den < num) {                // r positive with a fractional part
        ++q;
    }
    return q;
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

bool is_integer_multiple(const Rational& r, const BigInt& q) {
    return is_integer(r * Rational(q));
}

}  // namespace cforge
