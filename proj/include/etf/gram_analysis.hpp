#pragma once

// Exact structural tests on Gram data: equiangularity, tightness (with
// frame bound and exact rank), triple products, canonical label tables for
// the symmetry engine, index-aligned switching equivalence, quadratic-
// residue triple classification for Paley frames, and 3c-uniformity.

#include <json.hpp>

#include <vector>

#include "etf/construct.hpp"
#include "etf/cyclotomic.hpp"
#include "etf/finite_field.hpp"
#include "etf/rational.hpp"

namespace etf {

// Labels for ordered pairs of distinct indices. Label values are dense
// small integers assigned by sorting the distinct Cyclotomic values; two
// pairs share a label iff their Gram entries are exactly equal.
struct PairLabelTable {
  unsigned n = 0;
  std::vector<int> labels;                 // n*n, row-major; -1 on diagonal
  std::vector<Cyclotomic> value_of_label;  // canonical (sorted) order
  std::vector<int> conj_label;             // involution on label ids

  int at(unsigned j, unsigned k) const { return labels[j * n + k]; }
};

// Labels for ordered triples of distinct indices, same conventions.
struct TripleLabelTable {
  unsigned n = 0;
  std::vector<int> labels;  // n*n*n; -1 when indices repeat
  std::vector<Cyclotomic> value_of_label;
  std::vector<int> conj_label;

  int at(unsigned j, unsigned k, unsigned l) const {
    return labels[(static_cast<size_t>(j) * n + k) * n + l];
  }
};

struct EquiangularVerdict {
  bool ok = false;
  Cyclotomic value;  // the common |<v_j,v_k>|^2 when ok (exact, real)
  std::string message;
};

struct TightVerdict {
  bool ok = false;
  Cyclotomic bound;  // A = trace(G^2)/trace(G) (exact) when ok
  size_t rank = 0;   // exact rank of G (always computed)
  std::string message;
};

struct UniformVerdict {
  bool ok = false;
  Cyclotomic value;  // the common TP + conj(TP) when ok
  std::string message;
};

// Hermitian product Phi^* applied to Phi: G[j][k] = <v_j, v_k>, taken
// conjugate-linear in the second argument (sum over rows r of
// entry[r][j] * conj(entry[r][k])). Throws on non-equal-norm columns.
GramMatrix gram(const FrameMatrix& frame);

EquiangularVerdict check_equiangular(const GramMatrix& g);
TightVerdict check_tight(const GramMatrix& g);
UniformVerdict check_3c_uniform(const GramMatrix& g);

// Whether the Gram passes both the equiangularity and tightness tests.
bool is_etf_gram(const GramMatrix& g);

// TP(j,k,l) on distinct indices; throws std::invalid_argument on repeats.
Cyclotomic triple_product(const GramMatrix& g, unsigned j, unsigned k,
                          unsigned l);

PairLabelTable pair_labels(const GramMatrix& g);
TripleLabelTable triple_labels(const GramMatrix& g);
TripleLabelTable triple_labels(const TripleTable& t);

// Number of quadratic residues among {x-y, y-z, z-x} under the frame's
// intertwined residue classes: a difference delta counts iff S^-1 delta is
// a quadratic residue, matching the two-value split of the Paley Gram.
// Returns 0..3 (0 = no residue, 3 = all residues). Inputs are distinct
// field element codes.
int paley_tp_class(const FieldSpec& field, long x, long y, long z);

// Index-aligned switching equivalence: both Grams must pass the ETF tests
// (throws std::invalid_argument otherwise, or on size mismatch); true iff
// the triple products agree at every aligned triple.
bool switching_equivalent_aligned(const GramMatrix& g1, const GramMatrix& g2);

}  // namespace etf
