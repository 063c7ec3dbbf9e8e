#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entbell {

/// Exact rational number. All probability-space computations use this type.
using Rational = mpq_class;

/// Parses "n", "n/d", "-n/d" or a finite decimal such as "0.25".
/// Throws Error(ParseError) on anything else or on a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "n/d" form ("n" when d == 1).
std::string to_string(const Rational& value);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// FNV-1a style hash over the canonical limbs of a rational vector.
std::uint64_t hash_rationals(std::span<const Rational> values);

struct RationalVectorHash {
  std::size_t operator()(const std::vector<Rational>& values) const {
    return static_cast<std::size_t>(hash_rationals(values));
  }
};

/// Least common multiple of all denominators.
mpz_class common_denominator(std::span<const Rational> values);

}  // namespace entbell
