#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repsel {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", an integer, or a decimal literal such as "0.25" or "-1.5e-3"
/// into an exact rational. Throws ParseError on malformed input or q == 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// Two-decimal rendering truncated toward zero: 13/15 -> "0.86".
std::string truncate_2dp(const Rational& value);

double to_double(const Rational& value);

Rational sum(std::span<const Rational> values);

}  // namespace repsel
