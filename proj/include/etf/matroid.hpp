#pragma once

// Exact linear-dependence structure of a frame, derived from its Gram
// matrix: rank of subsets, spark (the size of the smallest dependent
// subset), the block design of all minimum-size dependent subsets (short
// circuits), the collection of subsets forming simplex tight frames for
// their span, and t-design verification of block collections.

#include "etf/design.hpp"
#include "etf/gram_analysis.hpp"
#include "etf/symmetry.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace etf {

// Default enumeration budget, counted in subsets whose rank is tested (not
// wall time, so runs are comparable across machines).
inline constexpr unsigned long long kDefaultEnumBudget = 20'000'000ULL;

// Complete designs materialize their blocks only up to this many.
inline constexpr unsigned long long kCompleteMaterializeCap = 200'000ULL;

// Raised when an enumeration pass would exceed the subset budget. Carries
// what the refusing pass would have cost and the best spark lower bound
// established by the sizes already scanned clean.
struct BudgetExceeded : std::runtime_error {
  Int needed;                  // subsets the refused pass requires
  unsigned long long budget;   // total budget that was available
  unsigned size_refused;       // subset size that could not be scanned
  unsigned best_lower_bound;   // spark >= this (smaller sizes all clean)

  BudgetExceeded(Int needed_, unsigned long long budget_,
                 unsigned size_refused_, unsigned best_lower_bound_);
};

// Deterministic work counters (reported instead of wall time).
struct EnumStats {
  unsigned long long subsets_checked = 0;  // leaf rank tests
  unsigned long long descents = 0;         // interior eliminations
};

struct MatroidReport {
  unsigned spark = 0;
  bool lower_bound_attained = false;
  BlockDesign bender;
  unsigned design_degree = 0;  // largest t with the bender a t-design
  bool binder_nonempty = false;

  nlohmann::json to_json() const;
};

// Exact rank of the principal Gram submatrix on `subset` (equals the rank
// of the corresponding vectors). Indices must be distinct and in range.
unsigned rank_of_subset(const GramMatrix& g,
                        const std::vector<unsigned>& subset);

// Smallest s such that some size-s subset is linearly dependent, found by
// scanning sizes in increasing order with early exit; returns rank+1 when
// no subset up to the rank is dependent (full spark). Requires an
// equal-norm Gram with nonzero vectors (so spark >= 2). Throws
// BudgetExceeded when a size pass would not fit the budget. A nonzero
// max_size caps the scan: the return value is 0 when no dependent subset
// of size <= max_size exists (and the spark could not be certified).
unsigned spark(const GramMatrix& g,
               unsigned long long budget = kDefaultEnumBudget,
               EnumStats* stats = nullptr, unsigned max_size = 0);

// Exact rational test whether (s-1)^2 = d(n-1)/(n-d), i.e. whether s sits
// exactly on the dependent-subset lower bound for a (d,n)-ETF.
bool spark_lower_bound_attained(unsigned d, unsigned n, unsigned s);

// Smallest integer s with (s-1)^2 >= d(n-1)/(n-d): every (d,n)-ETF has
// spark at least this.
unsigned spark_analytic_lower_bound(unsigned d, unsigned n);

// All size-spark dependent subsets (short circuits) as a block design.
// Full-spark frames short-circuit to the complete design of all
// (rank+1)-subsets, materialized only below kCompleteMaterializeCap.
// `jobs` parallelizes the enumeration; results are independent of it.
BlockDesign bender(const GramMatrix& g,
                   unsigned long long budget = kDefaultEnumBudget,
                   unsigned jobs = 1, EnumStats* stats = nullptr);

// Subsets forming simplex tight frames for their span, searched at size =
// spark: blocks B with rank(B) = |B|-1 and G_B^2 = c G_B for
// c = trace(G_B^2)/trace(G_B), with equiangular off-diagonals. For an ETF
// Gram whose spark misses the analytic lower bound the result is empty
// without enumeration (dependent subsets at spark size cannot be
// simplices then).
BlockDesign binder(const GramMatrix& g,
                   unsigned long long budget = kDefaultEnumBudget,
                   unsigned jobs = 1, EnumStats* stats = nullptr);

// Returns lambda if every t-subset of points lies in exactly lambda > 0
// blocks; std::nullopt otherwise. Complete designs are answered
// combinatorially without materialized blocks.
std::optional<Int> is_t_design(const BlockDesign& d, unsigned t);

// Largest t <= block size with is_t_design success (0 if none). Checks the
// guarantee that t is at least the largest k for which the line symmetry
// group is k-homogeneous, and throws std::logic_error if violated.
unsigned bender_design_degree(const BlockDesign& bender_design,
                              const PermGroup& line_sym);

// Verifies on a deterministic sample of blocks that each is a circuit:
// dependent with every proper subset independent. Returns false on the
// first counterexample.
bool verify_short_circuits(const GramMatrix& g, const BlockDesign& d,
                           unsigned sample = 100);

// Full pipeline: spark, bound attainment, bender (+ sampled circuit
// verification), design degree against the line symmetry group, and
// binder non-emptiness.
MatroidReport matroid_report(const GramMatrix& g, const PermGroup& line_sym,
                             unsigned long long budget = kDefaultEnumBudget,
                             unsigned jobs = 1, EnumStats* stats = nullptr);

}  // namespace etf
