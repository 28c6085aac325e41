#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace anosov {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", integers, and decimals with optional exponent ("-1.386",
/// "2.5e-3") into an exact rational. Decimal input is taken at face value,
/// never through a binary double.
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& value);
std::string to_string(const Rational& value);

/// Exact value of a finite double.
Rational rational_from_double(double value);

double to_double(const Rational& value);

Rational abs(const Rational& value);

/// Best rational approximation with denominator at most `max_den` lying
/// within `tol` of `value` (continued fractions). Returns false if none.
bool rationalize(double value, double tol, long max_den, Rational& out);

Integer lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace anosov
