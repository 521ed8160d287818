#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace harmtree {

/// Exact rational with arbitrary-precision numerator and denominator.
/// Always kept canonical (reduced, positive denominator).
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (decimal integers). Throws std::invalid_argument
/// on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Nearest double; for reports only.
double approx(const Rational& q);

/// 2^e for any integer e.
Rational pow2(long e);

Rational abs(const Rational& q);

/// t / (1 + t); the bounded metric transform used throughout.
Rational bounded(const Rational& t);

std::size_t hash_value(const Rational& q) noexcept;

inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace harmtree
