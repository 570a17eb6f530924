#pragma once

// Exact rational arithmetic used by every module. Backed by GMP's mpq_class;
// values are always canonical (lowest terms, positive denominator).

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hk {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Domain-level failure (bad input value, precondition violated). The CLI maps
/// this to exit code 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// num / den in lowest terms. mpq_class(num, den) alone does not reduce, and
/// comparisons assume canonical operands. Throws DomainError when den == 0.
Rational make_rational(long num, long den);

/// Parses "p/q", "-p/q" or an integer literal. Decimal notation is rejected
/// because it is not an exact input format for this tool.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the value is an integer.
std::string to_string(const Rational& value);

/// Decimal approximation for display only; never used in a decision path.
std::string to_decimal_string(const Rational& value, int digits = 12);

/// Least common multiple of the denominators of all values (1 for an empty set).
BigInt common_denominator(const std::vector<Rational>& values);

}  // namespace hk
