#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace etf {

// An element of GF(p^s) as coordinates in the basis 1, alpha, ..., alpha^(s-1)
// where alpha is the (primitive) companion root of the field's modulus.
struct FfElt {
  std::vector<int> coords;  // entries in 0..p-1
  bool operator==(const FfElt&) const = default;
};

// A concrete model of GF(p^s): monic irreducible modulus pi, its companion
// matrix C (so multiplication by alpha is v -> Cv), discrete-log tables for
// the primitive element alpha = x mod pi, quadratic residues, the
// normal-basis residue, and the symmetric intertwiner S with SC = C^T S.
//
// Elements are handled as integer codes 0..q-1; code = sum coords[i] * p^i.
class FieldSpec {
 public:
  // Deterministic modulus scan: enumerate pi = x^s - (a_{s-1}x^{s-1}+...+a_0)
  // in ascending lexicographic order of (a_0, a_1, ...) and keep the first
  // candidate whose companion root alpha has multiplicative order exactly
  // q-1 (which also forces pi irreducible).
  static FieldSpec make(long p, int s);
  // Same construction with a caller-supplied modulus (monic, degree s,
  // constant term first, length s+1). Rejects non-irreducible moduli and
  // moduli whose root is not primitive.
  static FieldSpec make_with_modulus(long p, int s, std::vector<int> modulus);

  long p() const { return p_; }
  int s() const { return s_; }
  long q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }
  const std::vector<std::vector<int>>& companion() const { return comp_; }

  long encode(const FfElt& e) const;
  FfElt decode(long code) const;

  long add(long a, long b) const;
  long sub(long a, long b) const;
  long neg(long a) const;
  long mul(long a, long b) const;
  long inverse(long a) const;
  long pow_alpha(long k) const;  // code of alpha^k (k arbitrary integer)
  long dlog(long code) const;    // discrete log base alpha; code != 0
  long frobenius(long code) const;  // x -> x^p
  // Apply an s x s matrix over F_p to the element's coordinate vector.
  long apply_matrix(const std::vector<std::vector<int>>& M, long code) const;
  // Coordinate pairing <x,y> = sum x_i y_i mod p.
  int pairing(long a, long b) const;

  bool is_paley_admissible() const { return q_ % 4 == 3; }

  // Quadratic residues {alpha^(2k) : k = 0..(q-3)/2}, as codes in that order.
  std::vector<long> qr_codes() const;
  bool is_qr(long code) const;  // nonzero and even discrete log

  // Smallest b such that the Galois orbit of alpha^(2b) is an F_p-basis;
  // the residue itself; and its orbit. Requires q = 3 mod 4.
  long normal_basis_b() const;
  FfElt normal_basis_residue() const;
  std::vector<FfElt> normal_basis_orbit() const;

  // Symmetric invertible S over F_p with S C = C^T S and the normal-basis
  // pairing constraints; the first nullspace basis vector under the
  // deterministic reduced-row-echelon scan. Requires q = 3 mod 4.
  const std::vector<std::vector<int>>& intertwiner() const;
  const std::vector<std::vector<int>>& intertwiner_inverse() const;

  nlohmann::json to_json() const;
  static FieldSpec from_json(const nlohmann::json& j);

 private:
  FieldSpec() = default;
  void build_tables();       // powers/logs; throws if alpha not primitive
  void build_intertwiner();  // only for admissible fields

  long p_ = 0;
  int s_ = 0;
  long q_ = 0;
  std::vector<int> modulus_;            // length s+1, constant first, monic
  std::vector<std::vector<int>> comp_;  // companion matrix, comp_[row][col]
  std::vector<long> pow_;               // pow_[k] = code of alpha^k
  std::vector<long> log_;               // log_[code], code != 0
  long nb_b_ = -1;                      // normal-basis index b
  std::vector<std::vector<int>> s_mat_;
  std::vector<std::vector<int>> s_inv_;
};

// Trial-division irreducibility over F_p (modulus coefficients constant term
// first, monic). Intended for the small degrees this library works at.
bool poly_is_irreducible(long p, const std::vector<int>& poly);

// Dense linear algebra over F_p used by the field machinery and tests.
int modp_rank(long p, std::vector<std::vector<int>> m);
std::optional<std::vector<std::vector<int>>> modp_inverse(
    long p, std::vector<std::vector<int>> m);
// Nullspace basis of a homogeneous system, reduced-row-echelon order.
std::vector<std::vector<int>> modp_nullspace(long p,
                                             std::vector<std::vector<int>> a,
                                             int n_vars);

}  // namespace etf
