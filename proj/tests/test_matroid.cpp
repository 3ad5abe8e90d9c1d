#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etf/construct.hpp"
#include "etf/elimination.hpp"
#include "etf/gram_analysis.hpp"
#include "etf/matroid.hpp"
#include "etf/symmetry.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace etf;

namespace {

// Independent rank oracle: full-pivot elimination on the chosen principal
// submatrix, bypassing the incremental scanner entirely.
unsigned oracle_rank(const ExactMatrix& em, const std::vector<unsigned>& subset) {
  std::vector<int> idx(subset.begin(), subset.end());
  return static_cast<unsigned>(exact_rank_subset(em, idx));
}

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<unsigned>> subsets_lex(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(k);
  for (unsigned i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j)
      cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Unit vectors e0, e1, e2, e0: one exact repetition.
GramMatrix repeated_column_gram() {
  GramMatrix g;
  g.m = 1;
  g.n = 4;
  Cyclotomic one = Cyclotomic::one(1);
  Cyclotomic zero = Cyclotomic::zero(1);
  for (unsigned i = 0; i < 4; ++i) {
    g.labels.push_back(std::to_string(i));
    std::vector<Cyclotomic> row(4, zero);
    for (unsigned j = 0; j < 4; ++j)
      if (i % 3 == j % 3) row[j] = one;
    g.entries.push_back(std::move(row));
  }
  return g;
}

// A regular simplex on four points hidden inside a larger equal-norm
// non-equiangular system: the remaining vectors are pairwise orthogonal
// and orthogonal to the simplex.
GramMatrix planted_simplex_gram(unsigned extra) {
  GramMatrix s4 = simplex_gram(4);
  GramMatrix g;
  g.m = 1;
  g.n = 4 + extra;
  Cyclotomic norm = Cyclotomic::rational(1, Rat(3));
  Cyclotomic zero = Cyclotomic::zero(1);
  for (unsigned i = 0; i < g.n; ++i) {
    g.labels.push_back(std::to_string(i));
    std::vector<Cyclotomic> row(g.n, zero);
    for (unsigned j = 0; j < g.n; ++j) {
      if (i < 4 && j < 4)
        row[j] = s4.entries[i][j];
      else if (i == j)
        row[j] = norm;
    }
    g.entries.push_back(std::move(row));
  }
  return g;
}

// Unit vectors (1,0), (0,1), (3/5,4/5): dependent triple that is not
// equiangular, so it spans no regular simplex.
GramMatrix skew_coplanar_gram() {
  GramMatrix g;
  g.m = 1;
  g.n = 3;
  auto r = [](long num, long den) {
    return Cyclotomic::rational(1, Rat(num, den));
  };
  g.labels = {"0", "1", "2"};
  g.entries = {{r(1, 1), r(0, 1), r(3, 5)},
               {r(0, 1), r(1, 1), r(4, 5)},
               {r(3, 5), r(4, 5), r(1, 1)}};
  return g;
}

}  // namespace

TEST_CASE("subset rank matches the full-pivot oracle on direct examples") {
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  CHECK(rank_of_subset(g7, {0, 1, 2, 3, 4, 5, 6}) == 3);
  CHECK(rank_of_subset(g7, {2}) == 1);
  CHECK(rank_of_subset(g7, {}) == 0);
  for (const auto& t : subsets_lex(7, 3))
    CHECK(rank_of_subset(g7, t) == 3);

  GramMatrix s4 = simplex_gram(4);
  CHECK(rank_of_subset(s4, {0, 1, 2, 3}) == 3);
  CHECK(rank_of_subset(s4, {0, 1, 2}) == 3);
  CHECK(rank_of_subset(s4, {1, 3}) == 2);

  CHECK(rank_of_subset(onb_gram(5), {0, 2, 4}) == 3);

  CHECK_THROWS_AS(rank_of_subset(g7, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(rank_of_subset(g7, {7}), std::invalid_argument);
}

TEST_CASE("spark is the smallest dependent subset size") {
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  ExactMatrix em7 = to_exact_matrix(g7.entries);
  // derive independently: every triple has full rank, some 4-subset drops
  bool some_dependent_4 = false;
  for (const auto& q : subsets_lex(7, 4))
    if (oracle_rank(em7, q) < 4) some_dependent_4 = true;
  REQUIRE(some_dependent_4);
  CHECK(spark(g7) == 4);

  // full-spark cases terminate at rank + 1
  GramMatrix g11 = gram(paley_etf(paley_field(11)));
  ExactMatrix em11 = to_exact_matrix(g11.entries);
  CHECK(exact_rank(em11) == 5);
  for (const auto& q : subsets_lex(11, 5))  // derive: no dependent 5-subset
    CHECK(oracle_rank(em11, q) == 5);
  CHECK(spark(g11) == 6);

  CHECK(spark(simplex_gram(4)) == 4);
  CHECK(spark(onb_gram(3)) == 4);  // a basis has no dependent subsets at all
  CHECK(spark(repeated_column_gram()) == 2);
  CHECK(spark(skew_coplanar_gram()) == 3);

  GramMatrix bad = onb_gram(3);
  bad.entries[1][1] = Cyclotomic::rational(1, Rat(2));
  CHECK_THROWS_AS(spark(bad), std::invalid_argument);
  GramMatrix zero = onb_gram(2);
  zero.entries[0][0] = Cyclotomic::zero(1);
  CHECK_THROWS_AS(spark(zero), std::invalid_argument);
}

TEST_CASE("spark lower bound predicates") {
  CHECK(spark_analytic_lower_bound(3, 7) == 4);
  CHECK(spark_analytic_lower_bound(3, 4) == 4);
  CHECK(spark_analytic_lower_bound(171, 343) == 20);
  CHECK(spark_analytic_lower_bound(13, 27) == 6);

  CHECK(spark_lower_bound_attained(3, 4, 4));    // simplex meets the bound
  CHECK(spark_lower_bound_attained(15, 36, 6));  // (s-1)^2 = 15*35/21 = 25
  CHECK_FALSE(spark_lower_bound_attained(3, 7, 4));
  CHECK_FALSE(spark_lower_bound_attained(13, 27, 8));

  CHECK_THROWS_AS(spark_analytic_lower_bound(5, 5), std::invalid_argument);
  CHECK_THROWS_AS(spark_lower_bound_attained(7, 7, 4), std::invalid_argument);
}

TEST_CASE("bender of a full-spark frame is the complete design") {
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  BlockDesign b7 = bender(g7);
  CHECK(b7.v == 7);
  CHECK(b7.k == 4);
  CHECK(b7.complete);
  CHECK(b7.block_count == 35);
  REQUIRE(b7.blocks.size() == 35);
  CHECK(b7.blocks == subsets_lex(7, 4));
  ExactMatrix em7 = to_exact_matrix(g7.entries);
  for (const auto& blk : b7.blocks) CHECK(oracle_rank(em7, blk) == 3);

  GramMatrix g11 = gram(paley_etf(paley_field(11)));
  BlockDesign b11 = bender(g11);
  CHECK(b11.complete);
  CHECK(b11.k == 6);
  CHECK(b11.block_count == 462);
  CHECK(b11.blocks.size() == 462);

  BlockDesign bs = bender(simplex_gram(4));
  CHECK(bs.complete);
  CHECK(bs.block_count == 1);
  REQUIRE(bs.blocks.size() == 1);
  CHECK(bs.blocks[0] == std::vector<unsigned>{0, 1, 2, 3});

  // a basis: spark exceeds the number of vectors, so no blocks exist
  BlockDesign bb = bender(onb_gram(3));
  CHECK(bb.k == 4);
  CHECK(bb.block_count == 0);
  CHECK(bb.blocks.empty());
}

TEST_CASE("bender collects exactly the dependent minimum-size subsets") {
  GramMatrix rep = repeated_column_gram();
  BlockDesign br = bender(rep);
  CHECK(br.k == 2);
  CHECK_FALSE(br.complete);
  CHECK(br.block_count == 1);
  REQUIRE(br.blocks.size() == 1);
  CHECK(br.blocks[0] == std::vector<unsigned>{0, 3});

  GramMatrix planted = planted_simplex_gram(3);
  BlockDesign bp = bender(planted);
  CHECK(bp.k == 4);
  CHECK_FALSE(bp.complete);
  REQUIRE(bp.blocks.size() == 1);
  CHECK(bp.blocks[0] == std::vector<unsigned>{0, 1, 2, 3});

  // cross-validate against the oracle over the whole size class
  ExactMatrix emp = to_exact_matrix(planted.entries);
  for (const auto& q : subsets_lex(planted.n, 4)) {
    const bool dep = oracle_rank(emp, q) < 4;
    const bool listed =
        std::find(bp.blocks.begin(), bp.blocks.end(), q) != bp.blocks.end();
    CHECK(dep == listed);
  }
}

TEST_CASE("bender of the 27-vector frame is a 2-design on 351 blocks") {
  GramMatrix g27 = gram(paley_etf(paley_field(27)));
  BlockDesign bd = bender(g27);
  CHECK(bd.v == 27);
  CHECK(bd.k == 8);
  CHECK_FALSE(bd.complete);
  CHECK(bd.block_count == 351);
  REQUIRE(bd.blocks.size() == 351);
  CHECK(std::is_sorted(bd.blocks.begin(), bd.blocks.end()));

  // every reported block is a dependent 8-subset by the independent oracle
  ExactMatrix em27 = to_exact_matrix(g27.entries);
  for (const auto& blk : bd.blocks) CHECK(oracle_rank(em27, blk) == 7);

  // and sampled unreported 8-subsets are independent
  std::set<std::vector<unsigned>> in(bd.blocks.begin(), bd.blocks.end());
  std::mt19937_64 rng(12345);
  unsigned tested = 0;
  while (tested < 60) {
    std::vector<unsigned> pick;
    std::vector<char> used(27, 0);
    while (pick.size() < 8) {
      unsigned c = static_cast<unsigned>(rng() % 27);
      if (!used[c]) {
        used[c] = 1;
        pick.push_back(c);
      }
    }
    std::sort(pick.begin(), pick.end());
    if (in.count(pick)) continue;
    CHECK(oracle_rank(em27, pick) == 8);
    ++tested;
  }

  // combinatorial regularity: every pair of points in the same block count
  auto lambda2 = is_t_design(bd, 2);
  REQUIRE(lambda2.has_value());
  CHECK(*lambda2 == 28);
  CHECK(is_t_design(bd, 1).value() == 104);  // = 28 * 26 / 6.5 block incidence
  CHECK_FALSE(is_t_design(bd, 3).has_value());
  // block/pair double count: b * C(k,2) = lambda * C(v,2)
  CHECK(Int(351) * binomial(8, 2) == Int(28) * binomial(27, 2));

  // the block set is invariant under the line symmetry group
  PermGroup line = line_symmetry_group(triple_labels(g27));
  REQUIRE(line.order == 1053);
  for (const Permutation& p : line.generators) {
    std::set<std::vector<unsigned>> mapped;
    for (const auto& blk : bd.blocks) {
      std::vector<unsigned> img;
      for (unsigned x : blk) img.push_back(p(x));
      std::sort(img.begin(), img.end());
      mapped.insert(std::move(img));
    }
    CHECK(mapped == in);
  }

  CHECK(bender_design_degree(bd, line) == 2);
  CHECK(verify_short_circuits(g27, bd));

  // a block list corrupted with an independent subset fails verification
  std::vector<unsigned> indep;
  for (const auto& q : subsets_lex(27, 8))
    if (!in.count(q)) {
      indep = q;
      break;
    }
  REQUIRE(!indep.empty());
  BlockDesign tampered = bd;
  tampered.blocks[0] = indep;
  // sampling every block guarantees the corrupted one is inspected
  CHECK_FALSE(verify_short_circuits(g27, tampered, 351));

  // worker count never changes the result
  BlockDesign bd4 = bender(g27, kDefaultEnumBudget, 4);
  CHECK(bd4.blocks == bd.blocks);
  CHECK(bd4.block_count == bd.block_count);
  CHECK(bd4.complete == bd.complete);
}

TEST_CASE("design counting handles listed and complete designs alike") {
  BlockDesign fano = development({7}, {{1}, {2}, {4}});
  CHECK(is_t_design(fano, 2).value() == 1);
  CHECK(is_t_design(fano, 1).value() == 3);
  CHECK_FALSE(is_t_design(fano, 3).has_value());
  CHECK_THROWS_AS(is_t_design(fano, 0), std::invalid_argument);
  CHECK_THROWS_AS(is_t_design(fano, 4), std::invalid_argument);

  // complete designs answer combinatorially even without listed blocks
  BlockDesign whole;
  whole.v = 7;
  whole.k = 4;
  whole.complete = true;
  whole.block_count = binomial(7, 4);
  CHECK(is_t_design(whole, 2).value() == binomial(5, 2));
  CHECK(is_t_design(whole, 4).value() == 1);

  // a materialized complete design tallies to the same counts
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  BlockDesign b7 = bender(g7);
  CHECK(is_t_design(b7, 2).value() == binomial(5, 2));
  CHECK(is_t_design(b7, 4).value() == 1);

  PermGroup agl7 = agl_subgroup(paley_field(7));
  CHECK(bender_design_degree(b7, agl7) == 4);
  CHECK_THROWS_AS(bender_design_degree(b7, agl_subgroup(paley_field(11))),
                  std::invalid_argument);
}

TEST_CASE("binder keeps only blocks spanning a regular simplex") {
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  BlockDesign n7 = binder(g7);
  CHECK(n7.k == 4);
  CHECK(n7.block_count == 0);
  CHECK(n7.blocks.empty());

  BlockDesign ns = binder(simplex_gram(4));
  CHECK(ns.block_count == 1);
  REQUIRE(ns.blocks.size() == 1);
  CHECK(ns.blocks[0] == std::vector<unsigned>{0, 1, 2, 3});

  // non-equiangular input: the simplex is found among orthogonal chaff
  BlockDesign np = binder(planted_simplex_gram(3));
  CHECK(np.k == 4);
  CHECK(np.block_count == 1);
  REQUIRE(np.blocks.size() == 1);
  CHECK(np.blocks[0] == std::vector<unsigned>{0, 1, 2, 3});

  // dependent but not equiangular: rejected by the filter
  BlockDesign nk = binder(skew_coplanar_gram());
  CHECK(nk.k == 3);
  CHECK(nk.block_count == 0);

  // repeated column: two equal vectors are a one-dimensional simplex up to
  // a unimodular phase, so the pair survives
  BlockDesign nr = binder(repeated_column_gram());
  CHECK(nr.block_count == 1);
  CHECK(nr.blocks[0] == std::vector<unsigned>{0, 3});

  BlockDesign nb = binder(onb_gram(3));
  CHECK(nb.block_count == 0);
}

TEST_CASE("enumeration budget is enforced per size class") {
  GramMatrix g27 = gram(paley_etf(paley_field(27)));
  bool threw = false;
  try {
    spark(g27, 1000);
  } catch (const BudgetExceeded& e) {
    threw = true;
    CHECK(e.size_refused == 3);
    CHECK(e.best_lower_bound == 3);
    CHECK(e.budget == 1000);
    CHECK(e.needed == binomial(27, 3));
    CHECK(std::string(e.what()).find("spark >= 3") != std::string::npos);
  }
  CHECK(threw);

  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  CHECK_THROWS_AS(bender(g7, 10), BudgetExceeded);
  // exactly enough budget for the passes actually scanned still succeeds
  EnumStats st;
  CHECK(spark(g7, kDefaultEnumBudget, &st) == 4);
  CHECK(spark(g7, st.subsets_checked + binomial(7, 4).convert_to<unsigned long long>()) == 4);
}

TEST_CASE("enumeration statistics are deterministic") {
  // full-spark frame: sizes 2 and 3 scan fully, then the rank cap answers
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  EnumStats a, b;
  CHECK(spark(g7, kDefaultEnumBudget, &a) == 4);
  CHECK(spark(g7, kDefaultEnumBudget, &b) == 4);
  CHECK(a.subsets_checked == b.subsets_checked);
  CHECK(a.descents == b.descents);
  CHECK(a.subsets_checked == 21 + 35);

  // deficient frame: the size-2 pass stops at the first dependent pair,
  // which sits at lexicographic position 3 = {0,3}
  EnumStats c;
  CHECK(spark(repeated_column_gram(), kDefaultEnumBudget, &c) == 2);
  CHECK(c.subsets_checked == 3);
}

TEST_CASE("matroid report assembles the invariants") {
  GramMatrix g7 = gram(paley_etf(paley_field(7)));
  PermGroup line7 = line_symmetry_group(triple_labels(g7));
  MatroidReport r7 = matroid_report(g7, line7);
  CHECK(r7.spark == 4);
  CHECK_FALSE(r7.lower_bound_attained);
  CHECK(r7.bender.complete);
  CHECK(r7.bender.block_count == 35);
  CHECK(r7.design_degree == 4);
  CHECK_FALSE(r7.binder_nonempty);

  nlohmann::json j = r7.to_json();
  CHECK(j["kind"] == "matroid_report");
  CHECK(j["spark"] == 4);
  CHECK(j["design_degree"] == 4);
  CHECK(j["lower_bound_attained"] == false);
  CHECK(j["binder_nonempty"] == false);
  CHECK(j["bender"]["complete"] == true);

  GramMatrix s4 = simplex_gram(4);
  PermGroup lines = line_symmetry_group(triple_labels(s4));
  MatroidReport rs = matroid_report(s4, lines);
  CHECK(rs.spark == 4);
  CHECK(rs.lower_bound_attained);
  CHECK(rs.design_degree == 4);
  CHECK(rs.binder_nonempty);
}
