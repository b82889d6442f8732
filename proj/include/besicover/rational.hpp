#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace besicover {

// Exact arithmetic used throughout: arbitrary-precision integers and
// canonical rationals. No floating point enters any membership test,
// mass sum, or ratio.
using Int = mpz_class;
using Rat = mpq_class;

// Parses "p", "-p", or "p/q" (q > 0 after canonicalization).
Rat rat_from_string(const std::string& s);

// Renders canonical form: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

Int rat_floor(const Rat& r);
Int rat_ceil(const Rat& r);

// Floor/ceil clamped into int64, throwing if out of range.
int64_t rat_floor_i64(const Rat& r);
int64_t rat_ceil_i64(const Rat& r);

Int int_pow(const Int& base, unsigned long exp);
Rat rat_pow(const Rat& base, unsigned long exp);

// Largest n >= 0 with n*n <= v. Requires v >= 0.
Int isqrt_floor(const Int& v);

double rat_to_double(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace besicover
