#pragma once
// Exact rationals backed by GMP. mpq_class already keeps values canonical
// (positive denominator, reduced) once canonicalize() has run, and every
// helper here returns canonical values.

#include <gmpxx.h>

#include <string>
#include <vector>

namespace kzc {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// "p/q" or "p" when the denominator is one.
std::string toString(const Rational& r);

/// Accepts "p/q", "p", "-p/q". Throws std::invalid_argument on junk,
/// including decimal points and zero denominators.
Rational parseRational(const std::string& s);

inline Rational makeRational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool isZero(const Rational& r) { return sgn(r) == 0; }

}  // namespace kzc
