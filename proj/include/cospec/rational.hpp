#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace cospec {

// Exact arbitrary-precision rational scalar. All arithmetic on this type is
// exact; there is no rounding anywhere in the rational domain.
using Rational = mpq_class;

inline Rational rational_from_string(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Nearest rational with small denominator, by continued fractions. Used to
// propose exact eigenvalue candidates from floating approximations; callers
// must verify the candidate exactly before trusting it.
Rational rational_reconstruct(double x, unsigned long max_den = 1000000UL);

}  // namespace cospec
