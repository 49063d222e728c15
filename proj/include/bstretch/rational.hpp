#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace bst {

using Q = mpq_class;

// Parses "p/q", "p", or a decimal literal such as "1.4222" into an exact rational.
Q parse_rational(std::string_view text);

// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Q& x);

// Decimal rendering with a fixed number of digits, for humans only.
std::string to_decimal(const Q& x, int digits = 6);

Q make_q(long num, long den = 1);

mpz_class floor_q(const Q& x);
mpz_class ceil_q(const Q& x);
long floor_long(const Q& x);
long ceil_long(const Q& x);

inline const Q& qmin(const Q& a, const Q& b) { return b < a ? b : a; }
inline const Q& qmax(const Q& a, const Q& b) { return a < b ? b : a; }

}  // namespace bst
