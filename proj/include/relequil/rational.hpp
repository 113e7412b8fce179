#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace relequil {

// Arbitrary-precision rational. gmpxx canonicalizes after every arithmetic
// operation; values built from raw numerator/denominator pairs go through
// make_rational() so the lowest-terms invariant holds everywhere.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Parses "p", "p/q", or a decimal literal such as "-1.25" or "3e-2".
/// Decimal literals are converted exactly (0.1 becomes 1/10).
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

inline int sign(const Rational& value) { return sgn(value); }

inline double to_double(const Rational& value) { return value.get_d(); }

/// Exact conversion of a finite binary64 value.
Rational from_double(double value);

/// Exact square root when the argument is the square of a rational.
bool exact_sqrt(const Rational& value, Rational& root);

}  // namespace relequil
