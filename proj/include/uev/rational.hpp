#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace uev {

using Q = mpq_class;

// Accepts "n/d", "n", and plain decimals such as "0.15" or "-2.5".
Q parse_rational(const std::string& text);

// Canonical "n/d" form; integers print without a denominator.
std::string to_string(const Q& q);

Q abs(const Q& q);

// Smallest integer strictly greater than q.
mpz_class floor_plus_one(const Q& q);
mpz_class ceil_q(const Q& q);
mpz_class floor_q(const Q& q);

// Simplest rational strictly between lo and hi (lo < hi). An absent upper
// bound is passed as hi_infinite = true.
Q simplest_between(const Q& lo, const Q& hi, bool hi_infinite = false);

}  // namespace uev
