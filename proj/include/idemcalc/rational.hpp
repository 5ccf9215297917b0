#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace idem {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator once canonicalized; all constructors below do so.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

/// Parses "p", "-p" or "p/q" (q != 0). Anything else, including decimal
/// points and exponents, is rejected with std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

/// Size (in limbs) of the larger of numerator and denominator.
std::size_t limb_size(const Rational& value);

}  // namespace idem
