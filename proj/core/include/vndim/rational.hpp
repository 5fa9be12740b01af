#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace vndim {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(std::int64_t num, std::int64_t den = 1) {
  Rat r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

/// Parses "p", "-p/q" (arbitrary precision). Throws Error(ParseError) on bad input.
Rat rat_parse(const std::string& s);

/// "p/q" with q > 0, or just "p" when q == 1.
std::string rat_str(const Rat& r);

/// Fixed-point decimal with `digits` fractional digits, rounded half away from zero.
/// Deterministic; used for CSV columns and plots.
std::string rat_decimal(const Rat& r, int digits = 12);

/// r^n for n >= 0 by binary exponentiation.
Rat rat_pow(const Rat& r, std::uint64_t n);

/// Largest integer <= r.
Int rat_floor(const Rat& r);

}  // namespace vndim
