#pragma once

// Permutation groups and automorphism search over pair/triple label tables:
// vector and line symmetry groups, the predicted quadratic-residue affine
// groups and affine symplectic groups, k-transitivity / k-homogeneity
// decisions, group comparison, and triple-table isomorphism search.

#include <json.hpp>

#include <optional>
#include <vector>

#include "etf/finite_field.hpp"
#include "etf/gram_analysis.hpp"
#include "etf/rational.hpp"

namespace etf {

struct Permutation {
  std::vector<unsigned> images;

  static Permutation identity(unsigned n);

  unsigned size() const { return static_cast<unsigned>(images.size()); }
  unsigned operator()(unsigned i) const { return images[i]; }
  bool is_identity() const;

  // Composition: (a.after(b))(x) = a(b(x)) — apply b first, then a.
  Permutation after(const Permutation& first) const;
  Permutation inverse() const;

  bool operator==(const Permutation& o) const { return images == o.images; }
  bool operator<(const Permutation& o) const { return images < o.images; }
};

// A permutation group given by generators, with its exact order. Elements
// are materialized by breadth-first closure when the order fits the cap;
// `full_symmetric` marks groups known to be all of S_n (their elements are
// only materialized for small n). `truncated` is set when a closure hit
// the cap before completing, leaving `order` unknown (zero).
struct PermGroup {
  unsigned n = 0;
  std::vector<Permutation> generators;  // sorted, deduplicated, no identity
  Int order = 1;
  bool full_symmetric = false;
  bool materialized = false;
  bool truncated = false;
  std::vector<Permutation> elements;  // sorted when materialized

  // Membership; requires full_symmetric or materialized elements (throws
  // std::runtime_error otherwise).
  bool contains(const Permutation& p) const;

  nlohmann::json to_json() const;
};

inline constexpr size_t kElementCap = 10'000'000;

// Closure of the generators: exact order and sorted element list. If the
// closure exceeds the cap the group comes back truncated.
PermGroup group_from_generators(unsigned n, std::vector<Permutation> gens,
                                size_t element_cap = kElementCap);

// All permutations preserving the pair labeling: sigma with
// label(sigma(j), sigma(k)) = label(j, k) for all j != k. Exact order via
// orbit-stabilizer counting on the search tree; when every off-diagonal
// label is equal the group is S_n and is reported without search.
PermGroup vector_symmetry_group(const PairLabelTable& t,
                                size_t element_cap = kElementCap);

// All permutations preserving the triple labeling.
PermGroup line_symmetry_group(const TripleLabelTable& t,
                              size_t element_cap = kElementCap);

// The affine quadratic-residue group on F_q under the Paley frame's fixed
// column ordering (position 0 holds the zero element, position 1+l holds
// alpha^l): generated by the basis translations x -> x + e_i together with
// the intertwined multiplier x -> S(alpha^2 S^-1 x) and the intertwined
// Frobenius x -> S((S^-1 x)^p). Order asserted equal to q(q-1)/2 * s.
PermGroup agl_subgroup(const FieldSpec& field,
                       size_t element_cap = kElementCap);

// The affine symplectic group on F_p x F_p (point (a,b) at index a*p+b):
// translations plus SL(2,p). Order asserted equal to p^3 (p^2 - 1).
PermGroup asp_group(long p, size_t element_cap = kElementCap);

// Orbit computations from the generators alone (no materialization): the
// orbit of one ordered k-tuple (transitive) or one k-subset (homogeneous)
// must reach all of them. Throws std::runtime_error when the full tuple
// space is too large to enumerate.
bool is_k_transitive(const PermGroup& g, unsigned k);
bool is_k_homogeneous(const PermGroup& g, unsigned k);

// Set comparison on a common index set via order + generator membership.
bool groups_equal(const PermGroup& g1, const PermGroup& g2);
bool is_subgroup(const PermGroup& sub, const PermGroup& super);

// A permutation sigma with t2(sigma j, sigma k, sigma l) = t1(j, k, l) for
// every distinct triple — labels are matched across the two tables by their
// exact values. Returns the first match in deterministic search order, or
// nothing when no such permutation exists.
std::optional<Permutation> find_tp_isomorphism(const TripleLabelTable& t1,
                                               const TripleLabelTable& t2);

}  // namespace etf
