#include "etf/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace etf {

unsigned totient(unsigned m) {
  if (m == 0) throw std::invalid_argument("totient(0)");
  unsigned result = m, n = m;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace {

// Exact division of integer polynomials, monic divisor. Coefficients are
// constant-term first.
std::vector<Int> poly_div_exact(std::vector<Int> num,
                                const std::vector<Int>& den) {
  const int dn = static_cast<int>(num.size()) - 1;
  const int dd = static_cast<int>(den.size()) - 1;
  if (dd > dn) throw std::logic_error("poly_div_exact: degree underflow");
  std::vector<Int> quot(dn - dd + 1, 0);
  for (int k = dn - dd; k >= 0; --k) {
    Int c = num[k + dd];  // den is monic
    quot[k] = c;
    if (c == 0) continue;
    for (int i = 0; i <= dd; ++i) num[k + i] -= c * den[i];
  }
  for (const Int& c : num)
    if (c != 0) throw std::logic_error("poly_div_exact: nonzero remainder");
  return quot;
}

std::mutex g_cyclo_mutex;
std::map<unsigned, std::vector<Int>> g_cyclo_cache;

// Requires g_cyclo_mutex held. Fills the cache for every divisor of m in
// ascending order, so each step only needs already-cached entries.
const std::vector<Int>& cyclo_poly_locked(unsigned m) {
  auto it = g_cyclo_cache.find(m);
  if (it != g_cyclo_cache.end()) return it->second;
  for (unsigned d = 1; d <= m; ++d) {
    if (m % d != 0 || g_cyclo_cache.count(d)) continue;
    // x^d - 1 divided by the product of the lower cyclotomic polynomials.
    std::vector<Int> p(d + 1, 0);
    p[0] = -1;
    p[d] = 1;
    for (unsigned e = 1; e < d; ++e)
      if (d % e == 0) p = poly_div_exact(std::move(p), g_cyclo_cache.at(e));
    g_cyclo_cache.emplace(d, std::move(p));
  }
  return g_cyclo_cache.at(m);
}

// Canonical reduction of a rational polynomial in zeta_m: first fold
// exponents mod x^m - 1, then take the remainder mod the m-th cyclotomic
// polynomial. Returns a vector of length totient(m).
std::vector<Rat> reduce_coeffs(unsigned m, std::vector<Rat> p) {
  const unsigned phi = totient(m);
  const std::vector<Int>& cp = cyclotomic_polynomial(m);
  if (p.size() > m) {
    for (size_t e = p.size(); e-- > m;) {
      if (p[e] != 0) p[e - m] += p[e];
    }
    p.resize(m);
  }
  for (size_t deg = p.size(); deg-- > phi;) {
    if (p[deg] == 0) continue;
    Rat c = p[deg];
    for (unsigned i = 0; i <= phi; ++i) p[deg - phi + i] -= c * Rat(cp[i]);
  }
  p.resize(phi, Rat(0));
  return p;
}

}  // namespace

const std::vector<Int>& cyclotomic_polynomial(unsigned m) {
  if (m == 0) throw std::invalid_argument("cyclotomic_polynomial(0)");
  std::lock_guard<std::mutex> lock(g_cyclo_mutex);
  return cyclo_poly_locked(m);
}

Cyclotomic Cyclotomic::zero(unsigned m) {
  return Cyclotomic(m, std::vector<Rat>(totient(m), Rat(0)));
}

Cyclotomic Cyclotomic::one(unsigned m) { return rational(m, Rat(1)); }

Cyclotomic Cyclotomic::rational(unsigned m, const Rat& value) {
  std::vector<Rat> c(totient(m), Rat(0));
  c[0] = value;
  return Cyclotomic(m, std::move(c));
}

Cyclotomic Cyclotomic::root_power(unsigned m, long long k) {
  long long e = k % static_cast<long long>(m);
  if (e < 0) e += m;
  std::vector<Rat> p(static_cast<size_t>(e) + 1, Rat(0));
  p[static_cast<size_t>(e)] = 1;
  return Cyclotomic(m, reduce_coeffs(m, std::move(p)));
}

Cyclotomic Cyclotomic::from_coeffs(unsigned m, std::vector<Rat> coeffs) {
  return Cyclotomic(m, reduce_coeffs(m, std::move(coeffs)));
}

bool Cyclotomic::is_zero() const {
  for (const Rat& r : c_)
    if (r != 0) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat Cyclotomic::rational_value() const {
  if (!is_rational())
    throw std::invalid_argument("rational_value() of a non-rational element");
  return c_[0];
}

bool Cyclotomic::is_real() const { return conj() == *this; }

bool Cyclotomic::is_purely_imaginary() const { return conj() == -*this; }

void Cyclotomic::check_same_order(const Cyclotomic& o) const {
  if (m_ != o.m_)
    throw std::invalid_argument(
        "cyclotomic order mismatch: " + std::to_string(m_) + " vs " +
        std::to_string(o.m_) + " (use lifted() to embed explicitly)");
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  check_same_order(o);
  std::vector<Rat> r(c_);
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.c_[i];
  return Cyclotomic(m_, std::move(r));
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
  check_same_order(o);
  std::vector<Rat> r(c_);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= o.c_[i];
  return Cyclotomic(m_, std::move(r));
}

Cyclotomic Cyclotomic::operator-() const {
  std::vector<Rat> r(c_);
  for (Rat& x : r) x = -x;
  return Cyclotomic(m_, std::move(r));
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  check_same_order(o);
  const size_t n1 = c_.size(), n2 = o.c_.size();
  std::vector<Rat> p(n1 + n2 - 1, Rat(0));
  for (size_t i = 0; i < n1; ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < n2; ++j) {
      if (o.c_[j] == 0) continue;
      p[i + j] += c_[i] * o.c_[j];
    }
  }
  return Cyclotomic(m_, reduce_coeffs(m_, std::move(p)));
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  *this = *this + o;
  return *this;
}
Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  *this = *this - o;
  return *this;
}
Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  *this = *this * o;
  return *this;
}

Cyclotomic Cyclotomic::scaled(const Rat& r) const {
  std::vector<Rat> c(c_);
  for (Rat& x : c) x *= r;
  return Cyclotomic(m_, std::move(c));
}

Cyclotomic Cyclotomic::conj() const { return galois(-1); }

Cyclotomic Cyclotomic::galois(long long t) const {
  long long tm = t % static_cast<long long>(m_);
  if (tm < 0) tm += m_;
  if (std::gcd(static_cast<long long>(m_), tm) != 1)
    throw std::invalid_argument("galois exponent not coprime to order");
  std::vector<Rat> p(m_, Rat(0));
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    p[(k * static_cast<unsigned long long>(tm)) % m_] += c_[k];
  }
  return Cyclotomic(m_, reduce_coeffs(m_, std::move(p)));
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::invalid_argument("inverse of zero");
  // Extended Euclid in Q[x] on (this, cyclotomic polynomial): maintain
  // u*this = r (mod cp). The final nonzero remainder is a constant because
  // the cyclotomic polynomial is irreducible over Q.
  const std::vector<Int>& cpi = cyclotomic_polynomial(m_);
  std::vector<Rat> r0(cpi.size());
  for (size_t i = 0; i < cpi.size(); ++i) r0[i] = Rat(cpi[i]);
  std::vector<Rat> r1(c_);
  while (!r1.empty() && r1.back() == 0) r1.pop_back();
  std::vector<Rat> u0{Rat(0)}, u1{Rat(1)};

  auto deg = [](const std::vector<Rat>& p) {
    return static_cast<int>(p.size()) - 1;
  };
  while (deg(r1) > 0) {
    // r0 = q*r1 + r2
    std::vector<Rat> q(deg(r0) - deg(r1) + 1, Rat(0));
    std::vector<Rat> r2(r0);
    for (int k = deg(r2); k >= deg(r1); --k) {
      Rat c = r2[k] / r1.back();
      q[k - deg(r1)] = c;
      if (c == 0) continue;
      for (int i = 0; i <= deg(r1); ++i) r2[k - deg(r1) + i] -= c * r1[i];
    }
    while (!r2.empty() && r2.back() == 0) r2.pop_back();
    // u2 = u0 - q*u1
    std::vector<Rat> u2(std::max(u0.size(), q.size() + u1.size() - 1), Rat(0));
    for (size_t i = 0; i < u0.size(); ++i) u2[i] = u0[i];
    for (size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (size_t j = 0; j < u1.size(); ++j) u2[i + j] -= q[i] * u1[j];
    }
    while (!u2.empty() && u2.back() == 0) u2.pop_back();
    r0 = std::move(r1);
    r1 = std::move(r2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  if (r1.empty()) throw std::logic_error("inverse: zero gcd remainder");
  Rat scale = Rat(1) / r1[0];
  for (Rat& x : u1) x *= scale;
  return Cyclotomic(m_, reduce_coeffs(m_, std::move(u1)));
}

Cyclotomic Cyclotomic::abs_squared() const { return *this * conj(); }

Cyclotomic Cyclotomic::lifted(unsigned M) const {
  if (M % m_ != 0)
    throw std::invalid_argument("lifted(): target order not a multiple");
  if (M == m_) return *this;
  const unsigned t = M / m_;
  std::vector<Rat> p(static_cast<size_t>(c_.size() - 1) * t + 1, Rat(0));
  for (size_t k = 0; k < c_.size(); ++k) p[k * t] = c_[k];
  return Cyclotomic(M, reduce_coeffs(M, std::move(p)));
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  return m_ == o.m_ && c_ == o.c_;
}

bool Cyclotomic::operator<(const Cyclotomic& o) const {
  if (m_ != o.m_) return m_ < o.m_;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  }
  return false;
}

std::complex<double> Cyclotomic::approx() const {
  std::complex<double> s(0.0, 0.0);
  const double tau = 6.283185307179586476925287;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    double v = numerator(c_[k]).convert_to<double>() /
               denominator(c_[k]).convert_to<double>();
    double ang = tau * static_cast<double>(k) / static_cast<double>(m_);
    s += v * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return s;
}

std::string Cyclotomic::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    Rat a = c_[k];
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (k == 0 || a != 1) {
      os << rat_num_str(a);
      if (denominator(a) != 1) os << "/" << rat_den_str(a);
      if (k > 0) os << "*";
    }
    if (k > 0) {
      os << "z" << m_;
      if (k > 1) os << "^" << k;
    }
  }
  if (first) os << "0";
  return os.str();
}

nlohmann::json Cyclotomic::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rat& r : c_)
    arr.push_back({rat_num_str(r), rat_den_str(r)});
  return nlohmann::json{{"m", m_}, {"c", arr}};
}

Cyclotomic Cyclotomic::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("c"))
    throw std::invalid_argument("cyclotomic JSON needs fields m and c");
  unsigned m = j.at("m").get<unsigned>();
  if (m == 0) throw std::invalid_argument("cyclotomic JSON: zero order");
  const auto& arr = j.at("c");
  if (!arr.is_array() || arr.size() != totient(m))
    throw std::invalid_argument(
        "cyclotomic JSON: coefficient list must have length phi(m)");
  std::vector<Rat> c;
  c.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("cyclotomic JSON: bad coefficient entry");
    Rat r = rat_from_strings(e[0].get<std::string>(), e[1].get<std::string>());
    // Canonical form: GMP keeps rationals reduced with positive denominator.
    c.push_back(r);
  }
  return from_coeffs(m, std::move(c));
}

}  // namespace etf
