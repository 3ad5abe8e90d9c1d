#include "etf/finite_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace etf {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long ipow_checked(long p, int s, long bound) {
  long q = 1;
  for (int i = 0; i < s; ++i) {
    if (q > bound / p) return -1;
    q *= p;
  }
  return q;
}

// Remainder of polynomial division over F_p; both constant-term first.
std::vector<int> poly_mod(long p, std::vector<int> a,
                          const std::vector<int>& b) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db) {
    int da = static_cast<int>(a.size()) - 1;
    // b is monic in every use here
    long c = a.back() % p;
    for (int i = 0; i <= db; ++i) {
      long v = (a[da - db + i] - c * b[i]) % p;
      a[da - db + i] = static_cast<int>((v + p) % p);
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

}  // namespace

bool poly_is_irreducible(long p, const std::vector<int>& poly) {
  int s = static_cast<int>(poly.size()) - 1;
  if (s < 1) return false;
  if (poly[0] % p == 0 && s > 1) return false;  // divisible by x
  if (s == 1) return true;
  // Trial division by every monic polynomial of degree 1..s/2.
  for (int d = 1; 2 * d <= s; ++d) {
    long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
      std::vector<int> div(d + 1);
      long c = code;
      for (int i = 0; i < d; ++i) {
        div[i] = static_cast<int>(c % p);
        c /= p;
      }
      div[d] = 1;
      if (poly_mod(p, poly, div).empty()) return false;
    }
  }
  return true;
}

int modp_rank(long p, std::vector<std::vector<int>> m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && m[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[rank], m[piv]);
    long inv = 1, base = ((m[rank][c] % p) + p) % p, e = p - 2;
    while (e) {  // Fermat inverse
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (size_t cc = c; cc < cols; ++cc)
      m[rank][cc] = static_cast<int>(((m[rank][cc] * inv) % p + p) % p);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] % p == 0) continue;
      long f = ((m[r][c] % p) + p) % p;
      for (size_t cc = c; cc < cols; ++cc) {
        long v = (m[r][cc] - f * m[rank][cc]) % p;
        m[r][cc] = static_cast<int>((v + p) % p);
      }
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

std::optional<std::vector<std::vector<int>>> modp_inverse(
    long p, std::vector<std::vector<int>> m) {
  size_t n = m.size();
  std::vector<std::vector<int>> inv(n, std::vector<int>(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] % p == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[c], m[piv]);
    std::swap(inv[c], inv[piv]);
    long e = p - 2, base = ((m[c][c] % p) + p) % p, ival = 1;
    while (e) {
      if (e & 1) ival = ival * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (size_t cc = 0; cc < n; ++cc) {
      m[c][cc] = static_cast<int>(((m[c][cc] * ival) % p + p) % p);
      inv[c][cc] = static_cast<int>(((inv[c][cc] * ival) % p + p) % p);
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] % p == 0) continue;
      long f = ((m[r][c] % p) + p) % p;
      for (size_t cc = 0; cc < n; ++cc) {
        long v1 = (m[r][cc] - f * m[c][cc]) % p;
        m[r][cc] = static_cast<int>((v1 + p) % p);
        long v2 = (inv[r][cc] - f * inv[c][cc]) % p;
        inv[r][cc] = static_cast<int>((v2 + p) % p);
      }
    }
  }
  return inv;
}

std::vector<std::vector<int>> modp_nullspace(long p,
                                             std::vector<std::vector<int>> a,
                                             int n_vars) {
  // Reduced row echelon form, then one basis vector per free column in
  // ascending column order.
  size_t rows = a.size();
  std::vector<int> pivot_col;
  size_t rank = 0;
  for (int c = 0; c < n_vars && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && a[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[rank], a[piv]);
    long e = p - 2, base = ((a[rank][c] % p) + p) % p, ival = 1;
    while (e) {
      if (e & 1) ival = ival * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (int cc = 0; cc < n_vars; ++cc)
      a[rank][cc] = static_cast<int>(((a[rank][cc] * ival) % p + p) % p);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] % p == 0) continue;
      long f = ((a[r][c] % p) + p) % p;
      for (int cc = 0; cc < n_vars; ++cc) {
        long v = (a[r][cc] - f * a[rank][cc]) % p;
        a[r][cc] = static_cast<int>((v + p) % p);
      }
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<std::vector<int>> basis;
  std::vector<bool> is_pivot(n_vars, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (int free_c = 0; free_c < n_vars; ++free_c) {
    if (is_pivot[free_c]) continue;
    std::vector<int> v(n_vars, 0);
    v[free_c] = 1;
    for (size_t r = 0; r < rank; ++r) {
      long val = (p - a[r][free_c] % p) % p;
      v[pivot_col[r]] = static_cast<int>(val);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

FieldSpec FieldSpec::make(long p, int s) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (s < 1) throw std::invalid_argument("extension degree must be >= 1");
  long q = ipow_checked(p, s, 10000);
  if (q < 0)
    throw std::invalid_argument("field size exceeds the configured bound");
  // Odometer over (a_0, ..., a_{s-1}), rightmost digit fastest, which walks
  // the tuples in ascending lexicographic order.
  std::vector<int> a(s, 0);
  while (true) {
    if (a[0] != 0) {
      std::vector<int> modulus(s + 1);
      for (int i = 0; i < s; ++i) modulus[i] = static_cast<int>((p - a[i]) % p);
      modulus[s] = 1;
      FieldSpec f;
      f.p_ = p;
      f.s_ = s;
      f.q_ = q;
      f.modulus_ = modulus;
      try {
        f.build_tables();
        if (!poly_is_irreducible(p, modulus))
          throw std::logic_error("primitive companion root with reducible modulus");
        if (f.is_paley_admissible()) f.build_intertwiner();
        return f;
      } catch (const std::invalid_argument&) {
        // not primitive; keep scanning
      }
    }
    int i = s - 1;
    while (i >= 0 && a[i] == p - 1) a[i--] = 0;
    if (i < 0) break;
    ++a[i];
  }
  throw std::logic_error("no primitive modulus found");
}

FieldSpec FieldSpec::make_with_modulus(long p, int s,
                                       std::vector<int> modulus) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (s < 1) throw std::invalid_argument("extension degree must be >= 1");
  long q = ipow_checked(p, s, 10000);
  if (q < 0)
    throw std::invalid_argument("field size exceeds the configured bound");
  if (static_cast<int>(modulus.size()) != s + 1)
    throw std::invalid_argument("modulus must have degree s (s+1 coefficients)");
  if (modulus[s] != 1) throw std::invalid_argument("modulus must be monic");
  for (int& c : modulus) {
    if (c < 0 || c >= p)
      throw std::invalid_argument("modulus coefficients must lie in 0..p-1");
  }
  if (!poly_is_irreducible(p, modulus))
    throw std::invalid_argument("modulus is not irreducible");
  FieldSpec f;
  f.p_ = p;
  f.s_ = s;
  f.q_ = q;
  f.modulus_ = std::move(modulus);
  f.build_tables();  // throws invalid_argument if the root is not primitive
  if (f.is_paley_admissible()) f.build_intertwiner();
  return f;
}

void FieldSpec::build_tables() {
  comp_.assign(s_, std::vector<int>(s_, 0));
  for (int r = 1; r < s_; ++r) comp_[r][r - 1] = 1;
  for (int r = 0; r < s_; ++r)
    comp_[r][s_ - 1] = static_cast<int>((p_ - modulus_[r]) % p_);

  pow_.assign(q_ - 1, 0);
  log_.assign(q_, -1);
  std::vector<int> v(s_, 0);
  v[0] = 1;  // alpha^0
  for (long k = 0; k < q_ - 1; ++k) {
    long code = 0, mult = 1;
    for (int i = 0; i < s_; ++i) {
      code += v[i] * mult;
      mult *= p_;
    }
    if (code == 0 || log_[code] != -1)
      throw std::invalid_argument("companion root is not primitive");
    pow_[k] = code;
    log_[code] = k;
    // v <- C v
    std::vector<int> w(s_, 0);
    for (int r = 0; r < s_; ++r) {
      long acc = 0;
      for (int c = 0; c < s_; ++c) acc += static_cast<long>(comp_[r][c]) * v[c];
      w[r] = static_cast<int>(acc % p_);
    }
    v = std::move(w);
  }
  // alpha^(q-1) must wrap to 1.
  long code = 0, mult = 1;
  for (int i = 0; i < s_; ++i) {
    code += v[i] * mult;
    mult *= p_;
  }
  if (code != 1) throw std::invalid_argument("companion root is not primitive");
}

long FieldSpec::encode(const FfElt& e) const {
  if (static_cast<int>(e.coords.size()) != s_)
    throw std::invalid_argument("element has wrong coordinate length");
  long code = 0, mult = 1;
  for (int i = 0; i < s_; ++i) {
    if (e.coords[i] < 0 || e.coords[i] >= p_)
      throw std::invalid_argument("element coordinate out of range");
    code += e.coords[i] * mult;
    mult *= p_;
  }
  return code;
}

FfElt FieldSpec::decode(long code) const {
  if (code < 0 || code >= q_) throw std::invalid_argument("bad element code");
  FfElt e;
  e.coords.resize(s_);
  for (int i = 0; i < s_; ++i) {
    e.coords[i] = static_cast<int>(code % p_);
    code /= p_;
  }
  return e;
}

long FieldSpec::add(long a, long b) const {
  FfElt x = decode(a), y = decode(b);
  for (int i = 0; i < s_; ++i)
    x.coords[i] = static_cast<int>((x.coords[i] + y.coords[i]) % p_);
  return encode(x);
}

long FieldSpec::neg(long a) const {
  FfElt x = decode(a);
  for (int i = 0; i < s_; ++i)
    x.coords[i] = static_cast<int>((p_ - x.coords[i]) % p_);
  return encode(x);
}

long FieldSpec::sub(long a, long b) const { return add(a, neg(b)); }

long FieldSpec::mul(long a, long b) const {
  if (a == 0 || b == 0) return 0;
  return pow_[(log_[a] + log_[b]) % (q_ - 1)];
}

long FieldSpec::inverse(long a) const {
  if (a == 0) throw std::invalid_argument("inverse of zero field element");
  return pow_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

long FieldSpec::pow_alpha(long k) const {
  long e = k % (q_ - 1);
  if (e < 0) e += q_ - 1;
  return pow_[e];
}

long FieldSpec::dlog(long code) const {
  if (code <= 0 || code >= q_)
    throw std::invalid_argument("discrete log of zero or bad code");
  return log_[code];
}

long FieldSpec::frobenius(long code) const {
  if (code == 0) return 0;
  return pow_[(log_[code] * p_) % (q_ - 1)];
}

long FieldSpec::apply_matrix(const std::vector<std::vector<int>>& M,
                             long code) const {
  FfElt x = decode(code);
  FfElt y;
  y.coords.assign(s_, 0);
  for (int r = 0; r < s_; ++r) {
    long acc = 0;
    for (int c = 0; c < s_; ++c) acc += static_cast<long>(M[r][c]) * x.coords[c];
    y.coords[r] = static_cast<int>(acc % p_);
  }
  return encode(y);
}

int FieldSpec::pairing(long a, long b) const {
  FfElt x = decode(a), y = decode(b);
  long acc = 0;
  for (int i = 0; i < s_; ++i) acc += static_cast<long>(x.coords[i]) * y.coords[i];
  return static_cast<int>(acc % p_);
}

std::vector<long> FieldSpec::qr_codes() const {
  if (p_ == 2)
    throw std::invalid_argument("quadratic residues need odd characteristic");
  std::vector<long> qr;
  qr.reserve((q_ - 1) / 2);
  for (long k = 0; 2 * k <= q_ - 3; ++k) qr.push_back(pow_[(2 * k) % (q_ - 1)]);
  return qr;
}

bool FieldSpec::is_qr(long code) const {
  if (code <= 0) return false;
  return log_[code] % 2 == 0;
}

long FieldSpec::normal_basis_b() const {
  if (!is_paley_admissible())
    throw std::invalid_argument("normal-basis residue needs q = 3 mod 4");
  return nb_b_;
}

FfElt FieldSpec::normal_basis_residue() const {
  return decode(pow_alpha(2 * normal_basis_b()));
}

std::vector<FfElt> FieldSpec::normal_basis_orbit() const {
  long x = pow_alpha(2 * normal_basis_b());
  std::vector<FfElt> orbit;
  for (int j = 0; j < s_; ++j) {
    orbit.push_back(decode(x));
    x = frobenius(x);
  }
  return orbit;
}

const std::vector<std::vector<int>>& FieldSpec::intertwiner() const {
  if (s_mat_.empty())
    throw std::invalid_argument("intertwiner needs q = 3 mod 4");
  return s_mat_;
}

const std::vector<std::vector<int>>& FieldSpec::intertwiner_inverse() const {
  if (s_inv_.empty())
    throw std::invalid_argument("intertwiner needs q = 3 mod 4");
  return s_inv_;
}

void FieldSpec::build_intertwiner() {
  // Normal-basis residue: smallest b whose Galois orbit of alpha^(2b) is
  // linearly independent over F_p.
  nb_b_ = -1;
  for (long b = 0; 2 * b <= q_ - 3; ++b) {
    std::vector<std::vector<int>> rows;
    long x = pow_alpha(2 * b);
    for (int j = 0; j < s_; ++j) {
      rows.push_back(decode(x).coords);
      x = frobenius(x);
    }
    if (modp_rank(p_, rows) == s_) {
      nb_b_ = b;
      break;
    }
  }
  if (nb_b_ < 0) throw std::logic_error("no normal basis of residues found");

  // Unknowns S[i][j], row-major. Equations: symmetry, S C = C^T S, and the
  // normal-basis pairing constraints e1^T S (C^(2bp^k) - C^(2bp^(k+1))) e1 = 0.
  const int n_vars = s_ * s_;
  auto var = [&](int i, int j) { return i * s_ + j; };
  std::vector<std::vector<int>> eqs;
  for (int i = 0; i < s_; ++i)
    for (int j = i + 1; j < s_; ++j) {
      std::vector<int> row(n_vars, 0);
      row[var(i, j)] = 1;
      row[var(j, i)] = static_cast<int>(p_ - 1);
      eqs.push_back(std::move(row));
    }
  for (int i = 0; i < s_; ++i)
    for (int j = 0; j < s_; ++j) {
      std::vector<int> row(n_vars, 0);
      for (int k = 0; k < s_; ++k) {
        row[var(i, k)] = static_cast<int>((row[var(i, k)] + comp_[k][j]) % p_);
        row[var(k, j)] =
            static_cast<int>((row[var(k, j)] + p_ - comp_[k][i]) % p_);
      }
      eqs.push_back(std::move(row));
    }
  for (int k = 0; k + 1 < s_; ++k) {
    // (C^(2bp^k) - C^(2bp^(k+1))) e1 = alpha^(2bp^k) - alpha^(2bp^(k+1))
    long pk = 1;
    for (int i = 0; i < k; ++i) pk = (pk * p_) % (q_ - 1);
    long e1 = (2 * nb_b_ % (q_ - 1)) * pk % (q_ - 1);
    long e2 = e1 * p_ % (q_ - 1);
    FfElt d = decode(sub(pow_alpha(e1), pow_alpha(e2)));
    std::vector<int> row(n_vars, 0);
    for (int j = 0; j < s_; ++j) row[var(0, j)] = d.coords[j];
    eqs.push_back(std::move(row));
  }
  auto basis = modp_nullspace(p_, eqs, n_vars);
  if (basis.empty())
    throw std::logic_error("intertwiner system has no nonzero solution");
  s_mat_.assign(s_, std::vector<int>(s_, 0));
  for (int i = 0; i < s_; ++i)
    for (int j = 0; j < s_; ++j) s_mat_[i][j] = basis[0][var(i, j)];
  auto inv = modp_inverse(p_, s_mat_);
  if (!inv)
    throw std::logic_error("intertwiner solution is singular");
  s_inv_ = *inv;
  // Spot-check both pairing conclusions on a few shifted index triples.
  long half = (q_ - 1) / 2;
  for (long t = 0; t < std::min<long>(half, 8); ++t) {
    long k = t % half, l = (3 * t + 1) % half, n = (5 * t + 2) % half;
    long lhs = pairing(pow_alpha(2 * k), apply_matrix(s_mat_, pow_alpha(2 * l)));
    long rhs1 = pairing(pow_alpha(2 * (k + n)),
                        apply_matrix(s_mat_, pow_alpha(2 * (l - n))));
    long rhs2 = pairing(pow_alpha(2 * p_ * k),
                        apply_matrix(s_mat_, pow_alpha(2 * p_ * l)));
    if (lhs != rhs1 || lhs != rhs2)
      throw std::logic_error("intertwiner pairing conclusions failed");
  }
}

nlohmann::json FieldSpec::to_json() const {
  return nlohmann::json{{"p", p_}, {"s", s_}, {"modulus", modulus_}};
}

FieldSpec FieldSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("s") ||
      !j.contains("modulus"))
    throw std::invalid_argument("field JSON needs p, s, modulus");
  return make_with_modulus(j.at("p").get<long>(), j.at("s").get<int>(),
                           j.at("modulus").get<std::vector<int>>());
}

}  // namespace etf
