#pragma once

#include "etf/rational.hpp"

#include <json.hpp>

#include <complex>
#include <vector>

namespace etf {

// Euler totient.
unsigned totient(unsigned m);

// Coefficients of the m-th cyclotomic polynomial, constant term first,
// length totient(m) + 1, leading coefficient 1. Cached; thread-safe.
const std::vector<Int>& cyclotomic_polynomial(unsigned m);

// An element of the cyclotomic field Q(zeta_m), stored as a dense vector of
// rational coefficients in the power basis 1, zeta, ..., zeta^(phi(m)-1),
// canonically reduced mod the m-th cyclotomic polynomial. Two elements are
// equal iff their coefficient vectors are equal. Arithmetic between elements
// of different orders is a usage error (throws); use lifted() to move an
// element into a larger field explicitly.
class Cyclotomic {
 public:
  Cyclotomic() : m_(1), c_(1, Rat(0)) {}

  static Cyclotomic zero(unsigned m);
  static Cyclotomic one(unsigned m);
  static Cyclotomic rational(unsigned m, const Rat& value);
  // zeta_m^k, any integer k (reduced mod m).
  static Cyclotomic root_power(unsigned m, long long k);
  // From an arbitrary-degree list of rational coefficients in powers of
  // zeta_m (degree may exceed phi(m); reduced canonically).
  static Cyclotomic from_coeffs(unsigned m, std::vector<Rat> coeffs);

  unsigned order() const { return m_; }
  unsigned degree() const { return static_cast<unsigned>(c_.size()); }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  // Value as a rational; requires is_rational().
  Rat rational_value() const;
  bool is_real() const;              // equal to its own conjugate
  bool is_purely_imaginary() const;  // conjugate equals negation

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);

  Cyclotomic scaled(const Rat& r) const;

  // Complex conjugate: zeta^k -> zeta^(m-k).
  Cyclotomic conj() const;
  // Galois action zeta -> zeta^t, gcd(t, m) = 1 required.
  Cyclotomic galois(long long t) const;
  // Multiplicative inverse (throws on zero).
  Cyclotomic inverse() const;
  // z * conj(z); always real.
  Cyclotomic abs_squared() const;

  // Explicit embedding into Q(zeta_M) for m | M. No implicit coercion
  // anywhere in the library.
  Cyclotomic lifted(unsigned M) const;

  bool operator==(const Cyclotomic& o) const;
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
  // Total order (by field order, then coefficients lexicographically);
  // used for canonical value dictionaries.
  bool operator<(const Cyclotomic& o) const;

  // Display helpers (never used on verification paths).
  std::complex<double> approx() const;
  std::string str() const;

  nlohmann::json to_json() const;
  static Cyclotomic from_json(const nlohmann::json& j);

 private:
  Cyclotomic(unsigned m, std::vector<Rat> reduced)
      : m_(m), c_(std::move(reduced)) {}
  void check_same_order(const Cyclotomic& o) const;

  unsigned m_;
  std::vector<Rat> c_;
};

}  // namespace etf
