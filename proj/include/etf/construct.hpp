#pragma once

// Exact frame constructions: Fourier matrices of finite abelian groups,
// difference-set harmonic frames, Paley frames over GF(q) with their
// symmetry generators, simplices and orthonormal bases, Naimark
// complements, skew-conference Gram matrices, and the Gabor-Steiner
// triple-product table. Everything is built over cyclotomic fields with
// unnormalized (integer-combination) vectors so all verification stays in
// exact arithmetic.

#include <json.hpp>

#include <string>
#include <vector>

#include "etf/cyclotomic.hpp"
#include "etf/design.hpp"
#include "etf/finite_field.hpp"
#include "etf/rational.hpp"

namespace etf {

// d x n matrix whose columns are frame vectors, entries in Q(zeta_m).
struct FrameMatrix {
  unsigned m = 1;
  unsigned d = 0;
  unsigned n = 0;
  std::vector<std::string> labels;               // one per column
  std::vector<std::vector<Cyclotomic>> entries;  // d rows, n columns

  nlohmann::json to_json() const;
  static FrameMatrix from_json(const nlohmann::json& j);
};

// n x n Hermitian matrix of inner products, entries in Q(zeta_m).
struct GramMatrix {
  unsigned m = 1;
  unsigned n = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<Cyclotomic>> entries;  // n rows, n columns

  nlohmann::json to_json() const;
  static GramMatrix from_json(const nlohmann::json& j);
};

// Triple products TP(j,k,l) = <v_j,v_k><v_k,v_l><v_l,v_j> on distinct
// indices, stored once per sorted triple; the other five orderings are
// recovered through the two identities TP is guaranteed to satisfy:
// cyclic invariance and conjugation under swapping the last two indices.
struct TripleTable {
  unsigned n = 0;
  unsigned m = 1;
  std::vector<std::string> labels;  // optional display names, size n or 0
  std::vector<Cyclotomic> fwd;      // value(j,k,l) for j<k<l, lex rank order
  std::vector<Cyclotomic> rev;      // value(j,l,k) = conj of fwd

  // Lex rank of a sorted triple j<k<l among all C(n,3) of them.
  size_t rank_sorted(unsigned j, unsigned k, unsigned l) const;
  // TP at any ordered triple of distinct indices.
  const Cyclotomic& value(unsigned a, unsigned b, unsigned c) const;

  static TripleTable from_gram(const GramMatrix& g);

  nlohmann::json to_json() const;
  static TripleTable from_json(const nlohmann::json& j);
};

// The standard symmetries of a Paley frame: q modulations (diagonal row
// operators paired with column translations x -> x+b), the quadratic-orbit
// translation T (cyclic row shift paired with y -> S C^-2 S^-1 y), and the
// Galois permutation (row l -> p*l paired with y -> S((S^-1 y)^p)).
// Column permutations are stored as position maps under the frame's fixed
// column ordering: perm[i] is the position holding the image of the element
// at position i.
struct PaleySymmetryGenerators {
  long q = 0;
  long p = 0;
  int s = 1;
  unsigned d = 0;             // (q-1)/2 rows
  std::vector<long> col_elems;  // element codes in column order (0 first)

  std::vector<std::vector<Cyclotomic>> modulation_diagonals;  // q x d
  std::vector<std::vector<unsigned>> modulation_col_perms;    // q x q
  std::vector<unsigned> translation_row_map;  // coordinate l -> l+1 (mod d)
  std::vector<unsigned> translation_col_perm;
  std::vector<unsigned> galois_row_map;  // coordinate l -> p*l (mod d)
  std::vector<unsigned> galois_col_perm;

  nlohmann::json to_json() const;
};

// Result of a difference-set tally.
struct DiffSetVerdict {
  bool ok = false;
  unsigned v = 0;
  unsigned k = 0;
  unsigned lambda = 0;  // meaningful when ok
  std::string message;  // human-readable reason on failure
};

// ---- Fourier / difference-set constructions over finite abelian groups.
// A group is a list of cyclic orders; elements are tuples (one entry per
// factor), serialized in CLI syntax as comma-separated coordinates.

// Square N x N character table, N = product of orders, rows and columns
// indexed lexicographically by group tuples (last coordinate fastest).
// Entry(g, h) = zeta_L ^ (sum_t (L/m_t) g_t h_t), L = lcm of the orders.
FrameMatrix fourier_matrix(const std::vector<unsigned>& orders);

DiffSetVerdict is_difference_set(
    const std::vector<unsigned>& orders,
    const std::vector<std::vector<unsigned>>& subset);

// Rows of the Fourier matrix indexed by a difference set; throws
// std::invalid_argument when the subset is not one. The result is asserted
// equiangular and tight before being returned.
FrameMatrix etf_from_difference_set(
    const std::vector<unsigned>& orders,
    const std::vector<std::vector<unsigned>>& subset);

// All group shifts of the subset, as blocks of point indices (points are
// lex positions of group elements). Blocks and block list sorted.
BlockDesign development(const std::vector<unsigned>& orders,
                        const std::vector<std::vector<unsigned>>& subset);

// Factor q = p^s (p prime) and build the default field of that order;
// throws std::invalid_argument when q is not a prime power (or < 2).
FieldSpec paley_field(long q);

// ---- Paley frames. The field must satisfy q = p^s = 3 (mod 4), q > 3.
// Rows are indexed by the quadratic residues alpha^{2k} (k = 0..(q-3)/2),
// columns by (0, alpha^0, alpha^1, ..., alpha^{q-2}); the entry at row k,
// column y is zeta_p ^ <alpha^{2k}, y> with <.,.> the coordinate-sum
// pairing of the field's power basis.
FrameMatrix paley_etf(const FieldSpec& field);

// Builds the generators and verifies U * Phi = Phi * P exactly for each;
// throws std::logic_error if any verification fails.
PaleySymmetryGenerators paley_symmetry_generators(const FieldSpec& field);

// ---- Small exact Gram constructions.
// Regular simplex of n vectors spanning n-1 dimensions: diagonal n-1,
// off-diagonal -1.
GramMatrix simplex_gram(unsigned n);
// Identity Gram (orthonormal basis).
GramMatrix onb_gram(unsigned n);

// Naimark complement A*I - G of a tight Gram with frame bound A; checks
// G^2 = A*G exactly, rejects the degenerate zero complement, and asserts
// the complement is itself tight with the same bound.
GramMatrix naimark_gram(const GramMatrix& g, const Rat& a);

// (q+1) x (q+1) Gram I + (g/q) * Sigma over Q(zeta_q), where Sigma is the
// skew-symmetric conference matrix of the Paley tournament (index inf
// first; Sigma[inf][x] = +1) and g = a - conj(a) for a = sum of zeta_q^t
// over quadratic residues t. Requires q prime, q = 3 (mod 4).
GramMatrix conference_etf_gram(long q);

// Triple-product table of the Gabor-Steiner frame of p^2 vectors indexed
// by F_p x F_p ((k,kappa) at position k*p+kappa): TP(u1,u2,u3) =
// zeta_p ^ ((w(u1,u3)+w(u2,u1)+w(u3,u2)) * (p+1)/2) with w the symplectic
// form w((a,b),(c,d)) = a*d - c*b. No frame matrix is constructed.
TripleTable gabor_steiner_tp_table(long p);

}  // namespace etf
