#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace sullivan {

/// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

/// Accepts "p" or "p/q" with an optional leading sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

}  // namespace sullivan
