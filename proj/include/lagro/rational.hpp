#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace lagro {

/// Exact rational scalar. GMP keeps every value canonical (lowest terms,
/// positive denominator) after each arithmetic operation.
using Scalar = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q". Throws InputError on anything else,
/// including decimal points and zero denominators.
Scalar parse_scalar(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Scalar& value);

bool is_integer(const Scalar& value);

Scalar abs(const Scalar& value);

Integer factorial(unsigned n);

/// base^exponent for a non-negative exponent.
Scalar power(const Scalar& base, unsigned exponent);

Integer floor(const Scalar& value);
Integer ceil(const Scalar& value);

}  // namespace lagro
