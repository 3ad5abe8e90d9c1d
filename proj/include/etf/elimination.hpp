#pragma once

// Exact fraction-free linear algebra over the ring of integer-coefficient
// elements of Q(zeta_m). Matrices store each entry as a dense coefficient
// vector in the power basis (length phi(m)). Elimination uses the
// two-step-division (Bareiss) scheme, where every division is exact in the
// ring; divisions are carried out by multiplying with the product of the
// entry's nontrivial Galois conjugates and then dividing coordinate-wise by
// the (rational integer) field norm.
//
// Two coefficient backends share the same algorithms:
//   Backend64  - int64 storage, __int128 accumulators, every operation
//                overflow-checked (throws CoeffOverflow);
//   BackendInt - GMP integers, never overflows.
// Callers run the fast lane first and fall back on overflow.

#include "etf/cyclotomic.hpp"
#include "etf/rational.hpp"

#include <climits>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace etf {

struct CoeffOverflow : std::runtime_error {
  CoeffOverflow() : std::runtime_error("64-bit coefficient lane overflow") {}
};

struct Backend64 {
  using C = long long;
  using W = __int128;
  static W widen(C a) { return static_cast<W>(a); }
  static W wmul(C a, C b) {
    return static_cast<W>(a) * static_cast<W>(b);  // 64x64 always fits 128
  }
  static void wadd(W& acc, W v) {
    if (__builtin_add_overflow(acc, v, &acc)) throw CoeffOverflow();
  }
  static void wsub(W& acc, W v) {
    if (__builtin_sub_overflow(acc, v, &acc)) throw CoeffOverflow();
  }
  static W wmulw(W a, C b) {
    W r;
    if (__builtin_mul_overflow(a, static_cast<W>(b), &r))
      throw CoeffOverflow();
    return r;
  }
  static C narrow(W a) {
    if (a > static_cast<W>(LLONG_MAX) || a < static_cast<W>(LLONG_MIN))
      throw CoeffOverflow();
    return static_cast<C>(a);
  }
  static C from_int(const Int& v) {
    if (v > LLONG_MAX || v < LLONG_MIN) throw CoeffOverflow();
    return v.convert_to<long long>();
  }
};

struct BackendInt {
  using C = Int;
  using W = Int;
  static W widen(const C& a) { return a; }
  static W wmul(const C& a, const C& b) { return a * b; }
  static void wadd(W& acc, const W& v) { acc += v; }
  static void wsub(W& acc, const W& v) { acc -= v; }
  static W wmulw(const W& a, const C& b) { return a * b; }
  static C narrow(const W& a) { return a; }
  static C from_int(const Int& v) { return v; }
};

// Ring context: precomputed reduction data for Z[zeta_m] under a backend.
template <class B>
struct RingOps {
  using C = typename B::C;
  using W = typename B::W;
  using Vec = std::vector<C>;   // one ring element, phi coordinates
  using WVec = std::vector<W>;  // wide accumulator element

  unsigned m = 1;
  unsigned phi = 1;
  // red[i] = canonical coordinates of x^(phi+i), i = 0..phi-2.
  std::vector<Vec> red;
  // pow[e] = canonical coordinates of x^e, e = 0..m-1.
  std::vector<Vec> pow;
  // exponents coprime to m, excluding 1 (Galois conjugations used for norms).
  std::vector<unsigned> conj_exps;

  explicit RingOps(unsigned order) : m(order), phi(totient(order)) {
    const std::vector<Int>& cp = cyclotomic_polynomial(m);
    // x^(phi) mod Phi = -(low part); build upward.
    std::vector<std::vector<Int>> redi;
    for (unsigned i = 0; i + 1 < phi; ++i) {
      std::vector<Int> row(phi, 0);
      if (i == 0) {
        for (unsigned j = 0; j < phi; ++j) row[j] = -cp[j];
      } else {
        // x^(phi+i) = x * x^(phi+i-1)
        const std::vector<Int>& prev = redi.back();
        for (unsigned j = 0; j + 1 < phi; ++j) row[j + 1] = prev[j];
        const Int& top = prev[phi - 1];
        if (top != 0)
          for (unsigned j = 0; j < phi; ++j) row[j] -= top * cp[j];
      }
      redi.push_back(std::move(row));
    }
    for (const auto& row : redi) {
      Vec r(phi);
      for (unsigned j = 0; j < phi; ++j) r[j] = B::from_int(row[j]);
      red.push_back(std::move(r));
    }
    // Canonical coordinates of x^e for e = 0..m-1, built by repeated
    // multiplication by x (reducing the top coefficient through
    // x^phi = -(low part of the cyclotomic polynomial)).
    std::vector<Int> xphi(phi);
    for (unsigned j = 0; j < phi; ++j) xphi[j] = -cp[j];
    std::vector<std::vector<Int>> powi;
    powi.reserve(m);
    for (unsigned e = 0; e < m; ++e) {
      std::vector<Int> row(phi, 0);
      if (e < phi) {
        row[e] = 1;
      } else {
        const std::vector<Int>& prev = powi[e - 1];
        for (unsigned j = 0; j + 1 < phi; ++j) row[j + 1] = prev[j];
        const Int& top = prev[phi - 1];
        if (top != 0)
          for (unsigned j = 0; j < phi; ++j) row[j] += top * xphi[j];
      }
      powi.push_back(row);
      Vec r(phi);
      for (unsigned j = 0; j < phi; ++j) r[j] = B::from_int(row[j]);
      pow.push_back(std::move(r));
    }
    for (unsigned k = 2; k < m; ++k) {
      unsigned a = k, b = m, g;
      while (b) {
        g = a % b;
        a = b;
        b = g;
      }
      if (a == 1) conj_exps.push_back(k);
    }
  }

  Vec zero() const { return Vec(phi, C(0)); }
  Vec one() const {
    Vec r(phi, C(0));
    r[0] = C(1);
    return r;
  }

  bool is_zero(const Vec& a) const {
    for (const C& x : a)
      if (x != 0) return false;
    return true;
  }
  bool is_zero_w(const WVec& a) const {
    for (const W& x : a)
      if (x != 0) return false;
    return true;
  }

  WVec widen(const Vec& a) const {
    WVec r(phi);
    for (unsigned i = 0; i < phi; ++i) r[i] = B::widen(a[i]);
    return r;
  }

  Vec narrow(const WVec& a) const {
    Vec r(phi);
    for (unsigned i = 0; i < phi; ++i) r[i] = B::narrow(a[i]);
    return r;
  }

  // Ring product of two narrow elements, wide result.
  WVec mul_wide(const Vec& a, const Vec& b) const {
    WVec conv(2 * phi - 1, W(0));
    for (unsigned i = 0; i < phi; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < phi; ++j) {
        if (b[j] == 0) continue;
        B::wadd(conv[i + j], B::wmul(a[i], b[j]));
      }
    }
    return reduce_wide(std::move(conv));
  }

  // Ring product of a wide element by a narrow one.
  WVec mul_wide_narrow(const WVec& a, const Vec& b) const {
    WVec conv(2 * phi - 1, W(0));
    for (unsigned i = 0; i < phi; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < phi; ++j) {
        if (b[j] == 0) continue;
        B::wadd(conv[i + j], B::wmulw(a[i], b[j]));
      }
    }
    return reduce_wide(std::move(conv));
  }

  WVec reduce_wide(WVec conv) const {
    for (size_t e = conv.size(); e-- > phi;) {
      if (conv[e] == 0) continue;
      const Vec& row = red[e - phi];
      for (unsigned j = 0; j < phi; ++j) {
        if (row[j] == 0) continue;
        B::wadd(conv[j], B::wmulw(conv[e], row[j]));
      }
      conv[e] = 0;
    }
    conv.resize(phi);
    return conv;
  }

  Vec mul(const Vec& a, const Vec& b) const { return narrow(mul_wide(a, b)); }

  void sub_inplace(WVec& a, const WVec& b) const {
    for (unsigned i = 0; i < phi; ++i) B::wsub(a[i], b[i]);
  }

  // Galois action zeta -> zeta^t (t coprime to m).
  Vec galois(const Vec& a, unsigned t) const {
    WVec acc(phi, W(0));
    for (unsigned k = 0; k < phi; ++k) {
      if (a[k] == 0) continue;
      const Vec& row = pow[(static_cast<unsigned long long>(k) * t) % m];
      for (unsigned j = 0; j < phi; ++j) {
        if (row[j] == 0) continue;
        B::wadd(acc[j], B::wmul(a[k], row[j]));
      }
    }
    return narrow(acc);
  }

  // Exact-division helper for a fixed divisor w: q = z * cofactor / norm,
  // where cofactor is the product of the nontrivial Galois conjugates of w
  // and norm = w * cofactor is a rational integer (the field norm).
  struct DivData {
    Vec cofactor;
    W norm = W(1);
    bool trivial = true;  // dividing by one
  };

  DivData unit_divisor() const {
    DivData d;
    d.cofactor = one();
    d.norm = W(1);
    d.trivial = true;
    return d;
  }

  DivData make_divisor(const Vec& w) const {
    DivData d;
    d.cofactor = one();
    for (unsigned t : conj_exps) d.cofactor = mul(d.cofactor, galois(w, t));
    WVec nw = mul_wide(w, d.cofactor);
    for (unsigned i = 1; i < phi; ++i)
      if (nw[i] != 0)
        throw std::logic_error("field norm has nonzero root coordinates");
    d.norm = nw[0];
    if (d.norm == 0) throw std::logic_error("division by zero ring element");
    d.trivial = false;
    // Dividing by 1 or -1 needs no cofactor multiply.
    if (is_one_abs(w)) d.trivial = (d.norm == 1 || d.norm == -(W(1)));
    return d;
  }

  bool is_one_abs(const Vec& w) const {
    if (!(w[0] == 1 || w[0] == -(C(1)))) return false;
    for (unsigned i = 1; i < phi; ++i)
      if (w[i] != 0) return false;
    return true;
  }

  Vec div_exact(WVec z, const DivData& d) const {
    if (!d.trivial) {
      z = mul_wide_narrow(z, d.cofactor);
    }
    Vec r(phi);
    for (unsigned i = 0; i < phi; ++i) {
      W q = z[i] / d.norm;
      if (q * d.norm != z[i])
        throw std::logic_error("inexact ring division in elimination");
      r[i] = B::narrow(q);
    }
    return r;
  }
};

// Dense matrix over Z[zeta_m]; entries as GMP coefficient vectors. This is
// the exchange format between cyclotomic-valued matrices and elimination.
struct ExactMatrix {
  unsigned m = 1;
  size_t n_rows = 0, n_cols = 0;
  std::vector<std::vector<Int>> entries;  // row-major; entry = phi coords

  std::vector<Int>& at(size_t r, size_t c) { return entries[r * n_cols + c]; }
  const std::vector<Int>& at(size_t r, size_t c) const {
    return entries[r * n_cols + c];
  }
};

// Clears denominators (scales by the LCM, which never changes rank).
ExactMatrix to_exact_matrix(const std::vector<std::vector<Cyclotomic>>& mat);

// Whether every coefficient of every entry fits the 64-bit lane.
bool fits_backend64(const ExactMatrix& mat);

// Rank by fraction-free elimination with full pivot scanning; tries the
// 64-bit lane first, falls back to GMP on overflow.
size_t exact_rank(const ExactMatrix& mat);

// Rank of the square submatrix on the given row/column index set.
size_t exact_rank_subset(const ExactMatrix& mat, const std::vector<int>& idx);

// Templated core used by the routines above and by the subset-enumeration
// engine. Returns the rank of mat restricted to rows `ri`, columns `ci`.
template <class B>
size_t elimination_rank(const RingOps<B>& ops, const ExactMatrix& mat,
                        const std::vector<int>& ri,
                        const std::vector<int>& ci) {
  using Ops = RingOps<B>;
  using Vec = typename Ops::Vec;
  const size_t R = ri.size(), Cn = ci.size();
  std::vector<std::vector<Vec>> a(R, std::vector<Vec>(Cn));
  for (size_t r = 0; r < R; ++r)
    for (size_t c = 0; c < Cn; ++c) {
      const std::vector<Int>& src = mat.at(ri[r], ci[c]);
      Vec v(ops.phi);
      for (unsigned i = 0; i < ops.phi; ++i) v[i] = B::from_int(src[i]);
      a[r][c] = std::move(v);
    }
  typename Ops::DivData prev = ops.unit_divisor();
  size_t rank = 0;
  std::vector<bool> row_done(R, false), col_done(Cn, false);
  while (true) {
    size_t pr = R, pc = Cn;
    for (size_t r = 0; r < R && pr == R; ++r) {
      if (row_done[r]) continue;
      for (size_t c = 0; c < Cn; ++c) {
        if (col_done[c]) continue;
        if (!ops.is_zero(a[r][c])) {
          pr = r;
          pc = c;
          break;
        }
      }
    }
    if (pr == R) break;
    const Vec piv = a[pr][pc];
    for (size_t r = 0; r < R; ++r) {
      if (row_done[r] || r == pr) continue;
      const Vec mult = a[r][pc];
      for (size_t c = 0; c < Cn; ++c) {
        if (col_done[c] || c == pc) continue;
        auto w1 = ops.mul_wide(a[r][c], piv);
        if (!ops.is_zero(mult)) {
          auto w2 = ops.mul_wide(mult, a[pr][c]);
          ops.sub_inplace(w1, w2);
        }
        a[r][c] = ops.div_exact(std::move(w1), prev);
      }
    }
    row_done[pr] = true;
    col_done[pc] = true;
    prev = ops.make_divisor(piv);
    ++rank;
  }
  return rank;
}

}  // namespace etf
