#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace etf {

// Arbitrary-precision integers and rationals (GMP-backed). All verification
// paths in this library use these types; floating point only ever appears in
// display helpers.
using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline std::string int_str(const Int& v) { return v.str(); }

inline Rat rat_from_strings(const std::string& num, const std::string& den) {
  Int n(num), d(den);
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(n, d);
}

inline std::string rat_num_str(const Rat& r) { return numerator(r).str(); }
inline std::string rat_den_str(const Rat& r) { return denominator(r).str(); }

// Exact binomial coefficient C(n, k).
inline Int binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

}  // namespace etf
