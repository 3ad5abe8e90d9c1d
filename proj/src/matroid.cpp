#include "etf/matroid.hpp"

#include "etf/elimination.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace etf {

BudgetExceeded::BudgetExceeded(Int needed_, unsigned long long budget_,
                               unsigned size_refused_,
                               unsigned best_lower_bound_)
    : std::runtime_error("enumeration budget exceeded: the size-" +
                         std::to_string(size_refused_) + " pass needs " +
                         int_str(needed_) + " subset checks but only " +
                         std::to_string(budget_) +
                         " were budgeted; spark >= " +
                         std::to_string(best_lower_bound_)),
      needed(std::move(needed_)),
      budget(budget_),
      size_refused(size_refused_),
      best_lower_bound(best_lower_bound_) {}

namespace {

void add_stats(EnumStats& into, const EnumStats& from) {
  into.subsets_checked += from.subsets_checked;
  into.descents += from.descents;
}

// Incremental fraction-free elimination over principal submatrices of a
// Hermitian positive-semidefinite integer Gram. Subsets c_0 < ... < c_{s-1}
// are enumerated depth-first in lexicographic order; the eliminated rows of
// the current prefix are frozen, so extending by one candidate costs a
// single row elimination. A subset is dependent exactly when its Gram
// determinant (the final Bareiss pivot) vanishes; while every proper subset
// is independent the earlier pivots are leading principal minors of a
// positive-definite matrix and never vanish, so no pivot search is needed.
template <class B>
struct Scanner {
  using Ops = RingOps<B>;
  using Vec = typename Ops::Vec;
  using Div = typename Ops::DivData;

  const ExactMatrix& g;
  const unsigned n;
  Ops ops;
  const unsigned s;
  Div unit;

  std::vector<std::vector<Vec>> tail;  // frozen row t over cols chosen[t]..n-1
  std::vector<Div> div;                // div[t] built from pivot of row t
  std::vector<unsigned> chosen;
  EnumStats stats;

  // called with each dependent subset (sorted); return false to stop
  std::function<bool(const std::vector<unsigned>&)> on_dependent;

  Scanner(const ExactMatrix& gram, unsigned size)
      : g(gram),
        n(static_cast<unsigned>(gram.n_cols)),
        ops(gram.m),
        s(size),
        unit(ops.unit_divisor()) {}

  Vec entry(unsigned r, unsigned c) const {
    const std::vector<Int>& src = g.at(r, c);
    Vec v(ops.phi);
    for (unsigned i = 0; i < ops.phi; ++i) v[i] = B::from_int(src[i]);
    return v;
  }

  // One Bareiss update: (cur * piv - fac * frozen) / prev.
  Vec step(const Vec& cur, const Vec& piv, const Vec& fac, const Vec& frozen,
           const Div& prev, bool fac_zero) const {
    auto w = ops.mul_wide(cur, piv);
    if (!fac_zero) ops.sub_inplace(w, ops.mul_wide(fac, frozen));
    return ops.div_exact(std::move(w), prev);
  }

  // Determinant-vanishing test for prefix + {c}, tracking only the pivot
  // columns and column c.
  bool leaf_is_dependent(unsigned c) {
    const size_t t = chosen.size();
    std::vector<Vec> pv(t);
    for (size_t j = 0; j < t; ++j) pv[j] = entry(c, chosen[j]);
    Vec vc = entry(c, c);
    for (size_t j = 0; j < t; ++j) {
      const Vec& dj = tail[j][0];
      const Vec fac = pv[j];
      const Div& prev = j == 0 ? unit : div[j - 1];
      const bool fz = ops.is_zero(fac);
      for (size_t k = j + 1; k < t; ++k)
        pv[k] =
            step(pv[k], dj, fac, tail[j][chosen[k] - chosen[j]], prev, fz);
      vc = step(vc, dj, fac, tail[j][c - chosen[j]], prev, fz);
    }
    return ops.is_zero(vc);
  }

  // Eliminates row c over its full remaining tail and freezes it as the
  // next prefix row.
  void push(unsigned c) {
    const size_t t = chosen.size();
    std::vector<Vec> pv(t);
    for (size_t j = 0; j < t; ++j) pv[j] = entry(c, chosen[j]);
    std::vector<Vec> row(n - c);
    for (unsigned i = c; i < n; ++i) row[i - c] = entry(c, i);
    for (size_t j = 0; j < t; ++j) {
      const Vec& dj = tail[j][0];
      const Vec fac = pv[j];
      const Div& prev = j == 0 ? unit : div[j - 1];
      const bool fz = ops.is_zero(fac);
      for (size_t k = j + 1; k < t; ++k)
        pv[k] =
            step(pv[k], dj, fac, tail[j][chosen[k] - chosen[j]], prev, fz);
      const unsigned off = c - chosen[j];
      for (unsigned i = 0; i < row.size(); ++i)
        row[i] = step(row[i], dj, fac, tail[j][off + i], prev, fz);
    }
    if (ops.is_zero(row[0]))
      throw std::logic_error(
          "dependent proper prefix during a minimum-size subset scan");
    ++stats.descents;
    div.push_back(ops.make_divisor(row[0]));
    tail.push_back(std::move(row));
    chosen.push_back(c);
  }

  void pop() {
    tail.pop_back();
    div.pop_back();
    chosen.pop_back();
  }

  // Enumerates completions of the current prefix with candidates from
  // [lo, n); returns false if the callback requested a stop.
  bool dfs(unsigned lo) {
    const unsigned t = static_cast<unsigned>(chosen.size());
    if (t + 1 == s) {
      for (unsigned c = lo; c < n; ++c) {
        ++stats.subsets_checked;
        if (leaf_is_dependent(c)) {
          chosen.push_back(c);
          const bool go = !on_dependent || on_dependent(chosen);
          chosen.pop_back();
          if (!go) return false;
        }
      }
      return true;
    }
    for (unsigned c = lo; c + (s - t) <= n; ++c) {
      push(c);
      const bool go = dfs(c + 1);
      pop();
      if (!go) return false;
    }
    return true;
  }
};

struct ScanResult {
  bool found = false;
  std::vector<std::vector<unsigned>> blocks;
  EnumStats stats;
};

template <class B>
ScanResult scan_pass(const ExactMatrix& em, unsigned s,
                     const std::vector<unsigned>& prefix,
                     bool stop_on_first) {
  ScanResult r;
  Scanner<B> sc(em, s);
  sc.on_dependent = [&](const std::vector<unsigned>& blk) {
    r.found = true;
    if (stop_on_first) return false;
    r.blocks.push_back(blk);
    return true;
  };
  for (unsigned c : prefix) sc.push(c);
  sc.dfs(prefix.empty() ? 0 : prefix.back() + 1);
  r.stats = sc.stats;
  return r;
}

// 64-bit coefficient lane first, exact GMP lane on overflow.
ScanResult scan_pass_auto(const ExactMatrix& em, unsigned s,
                          const std::vector<unsigned>& prefix,
                          bool stop_on_first) {
  if (fits_backend64(em)) {
    try {
      return scan_pass<Backend64>(em, s, prefix, stop_on_first);
    } catch (const CoeffOverflow&) {
    }
  }
  return scan_pass<BackendInt>(em, s, prefix, stop_on_first);
}

// All dependent s-subsets in lexicographic order. Work is split by the
// first two subset elements across `jobs` threads; per-range results are
// concatenated in range order, so the outcome is independent of the
// thread count.
std::vector<std::vector<unsigned>> collect_dependent(const ExactMatrix& em,
                                                     unsigned n, unsigned s,
                                                     unsigned jobs,
                                                     EnumStats& stats) {
  std::vector<std::vector<unsigned>> prefixes;
  if (s >= 3 && jobs > 1)
    for (unsigned a = 0; a + s <= n; ++a)
      for (unsigned b = a + 1; b + s - 1 <= n; ++b)
        prefixes.push_back({a, b});
  if (prefixes.size() < 2) {
    ScanResult r = scan_pass_auto(em, s, {}, false);
    add_stats(stats, r.stats);
    return std::move(r.blocks);
  }

  std::vector<ScanResult> results(prefixes.size());
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](unsigned slot) {
    try {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= prefixes.size()) break;
        results[i] = scan_pass_auto(em, s, prefixes[i], false);
      }
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<std::vector<unsigned>> blocks;
  for (auto& r : results) {
    add_stats(stats, r.stats);
    for (auto& b : r.blocks) blocks.push_back(std::move(b));
  }
  return blocks;
}

// Equal-norm validation shared by the enumeration entry points.
void require_equal_norm(const GramMatrix& g) {
  if (g.n == 0) throw std::invalid_argument("empty Gram matrix");
  const Cyclotomic& nu = g.entries[0][0];
  if (nu == Cyclotomic::zero(g.m))
    throw std::invalid_argument("zero-norm vectors have no spark");
  for (unsigned j = 1; j < g.n; ++j)
    if (!(g.entries[j][j] == nu))
      throw std::invalid_argument("subset scans need an equal-norm Gram");
}

std::vector<std::vector<unsigned>> all_subsets_lex(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(k);
  for (unsigned i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    // next combination in lexicographic order
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (unsigned j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::string label_or_index(const GramMatrix& g, unsigned i) {
  return g.labels.size() == g.n ? g.labels[i] : std::to_string(i);
}

GramMatrix principal_subgram(const GramMatrix& g,
                             const std::vector<unsigned>& subset) {
  GramMatrix sub;
  sub.m = g.m;
  sub.n = static_cast<unsigned>(subset.size());
  for (unsigned i : subset) sub.labels.push_back(label_or_index(g, i));
  sub.entries.resize(sub.n);
  for (unsigned r = 0; r < sub.n; ++r) {
    sub.entries[r].reserve(sub.n);
    for (unsigned c = 0; c < sub.n; ++c)
      sub.entries[r].push_back(g.entries[subset[r]][subset[c]]);
  }
  return sub;
}

// Internal spark with the caller's running budget; also reports the exact
// rank when it was computed (0 when not). A nonzero max_size caps the scan
// and 0 is returned when the spark could not be certified within the cap.
unsigned spark_scan(const GramMatrix& g, unsigned long long budget,
                    EnumStats& stats, unsigned& rank_out,
                    unsigned max_size = 0) {
  require_equal_norm(g);
  const unsigned n = g.n;
  ExactMatrix em = to_exact_matrix(g.entries);
  rank_out = 0;
  if (n <= 64) rank_out = static_cast<unsigned>(exact_rank(em));

  unsigned long long used = 0;
  for (unsigned s = 2;; ++s) {
    if (max_size != 0 && s > max_size) return 0;  // capped, undetermined
    if (rank_out != 0 && s > rank_out) {  // full spark, certified by rank
      const unsigned full = rank_out + 1;
      return (max_size != 0 && full > max_size) ? 0 : full;
    }
    if (s > n) return n + 1;  // all n vectors independent
    const Int need = binomial(n, s);
    if (Int(used) + need > Int(budget))
      throw BudgetExceeded(need, budget, s, s);
    ScanResult r = scan_pass_auto(em, s, {}, true);
    used += r.stats.subsets_checked;
    add_stats(stats, r.stats);
    if (r.found) return s;
  }
}

}  // namespace

unsigned rank_of_subset(const GramMatrix& g,
                        const std::vector<unsigned>& subset) {
  if (subset.empty()) return 0;
  std::vector<char> seen(g.n, 0);
  for (unsigned i : subset) {
    if (i >= g.n) throw std::invalid_argument("subset index out of range");
    if (seen[i]) throw std::invalid_argument("repeated subset index");
    seen[i] = 1;
  }
  ExactMatrix em = to_exact_matrix(g.entries);
  std::vector<int> idx(subset.begin(), subset.end());
  return static_cast<unsigned>(exact_rank_subset(em, idx));
}

unsigned spark(const GramMatrix& g, unsigned long long budget,
               EnumStats* stats, unsigned max_size) {
  EnumStats local;
  unsigned rank = 0;
  const unsigned s = spark_scan(g, budget, local, rank, max_size);
  if (stats) add_stats(*stats, local);
  return s;
}

bool spark_lower_bound_attained(unsigned d, unsigned n, unsigned s) {
  if (n <= d || s < 2)
    throw std::invalid_argument("bound test needs n > d and s >= 2");
  const long sd = static_cast<long>(s) - 1;
  return Rat(sd * sd) == Rat(static_cast<long>(d) * (n - 1),
                             static_cast<long>(n) - d);
}

unsigned spark_analytic_lower_bound(unsigned d, unsigned n) {
  if (n <= d) throw std::invalid_argument("bound needs n > d");
  const unsigned long long num = 1ULL * d * (n - 1);
  const unsigned long long den = n - d;
  unsigned c = 0;
  while (1ULL * c * c * den < num) ++c;
  return c + 1;
}

BlockDesign bender(const GramMatrix& g, unsigned long long budget,
                   unsigned jobs, EnumStats* stats) {
  EnumStats local;
  unsigned rank = 0;
  const unsigned s = spark_scan(g, budget, local, rank);

  BlockDesign out;
  out.v = g.n;
  out.k = s;
  if (rank != 0 && s == rank + 1) {
    // full spark: every (rank+1)-subset is dependent, no ranks needed
    out.complete = true;
    out.block_count = s <= g.n ? binomial(g.n, s) : Int(0);
    if (out.block_count > 0 && out.block_count <= Int(kCompleteMaterializeCap))
      out.blocks = all_subsets_lex(g.n, s);
    if (stats) add_stats(*stats, local);
    return out;
  }

  const Int need = binomial(g.n, s);
  if (Int(local.subsets_checked) + need > Int(budget))
    throw BudgetExceeded(need, budget, s, s);
  ExactMatrix em = to_exact_matrix(g.entries);
  out.blocks = collect_dependent(em, g.n, s, jobs, local);
  out.block_count = Int(out.blocks.size());
  if (stats) add_stats(*stats, local);
  return out;
}

BlockDesign binder(const GramMatrix& g, unsigned long long budget,
                   unsigned jobs, EnumStats* stats) {
  EnumStats local;
  unsigned rank = 0;
  const unsigned s = spark_scan(g, budget, local, rank);
  if (rank == 0) rank = static_cast<unsigned>(exact_rank(to_exact_matrix(g.entries)));

  BlockDesign out;
  out.v = g.n;
  out.k = s;
  // For an ETF, minimum-size dependent subsets form simplices exactly when
  // the spark sits on the analytic lower bound; otherwise nothing at this
  // size qualifies and no enumeration is needed.
  if (g.n > rank && is_etf_gram(g) &&
      !spark_lower_bound_attained(rank, g.n, s)) {
    if (stats) add_stats(*stats, local);
    return out;
  }
  if (s > g.n) {  // no dependent subsets exist at all
    if (stats) add_stats(*stats, local);
    return out;
  }

  const Int need = binomial(g.n, s);
  if (Int(local.subsets_checked) + need > Int(budget))
    throw BudgetExceeded(need, budget, s, s);
  ExactMatrix em = to_exact_matrix(g.entries);
  std::vector<std::vector<unsigned>> candidates =
      collect_dependent(em, g.n, s, jobs, local);
  for (const auto& blk : candidates) {
    std::vector<int> idx(blk.begin(), blk.end());
    if (exact_rank_subset(em, idx) != blk.size() - 1) continue;
    GramMatrix sub = principal_subgram(g, blk);
    if (!check_equiangular(sub).ok) continue;
    if (!check_tight(sub).ok) continue;
    out.blocks.push_back(blk);
  }
  out.block_count = Int(out.blocks.size());
  if (stats) add_stats(*stats, local);
  return out;
}

std::optional<Int> is_t_design(const BlockDesign& d, unsigned t) {
  if (t == 0 || t > d.k || t > d.v)
    throw std::invalid_argument("design degree needs 1 <= t <= block size");
  if (d.complete && d.blocks.empty() && d.block_count > 0)
    return binomial(d.v - t, d.k - t);
  if (d.blocks.empty()) return std::nullopt;

  std::map<std::vector<unsigned>, long long> count;
  std::vector<unsigned> pick(t);
  for (const auto& blk : d.blocks) {
    // all t-subsets of this block, lexicographically
    std::vector<unsigned> sel(t);
    for (unsigned i = 0; i < t; ++i) sel[i] = i;
    for (;;) {
      for (unsigned i = 0; i < t; ++i) pick[i] = blk[sel[i]];
      ++count[pick];
      int i = static_cast<int>(t) - 1;
      while (i >= 0 && sel[i] == blk.size() - t + i) --i;
      if (i < 0) break;
      ++sel[i];
      for (unsigned j = i + 1; j < t; ++j) sel[j] = sel[j - 1] + 1;
    }
  }
  if (Int(count.size()) != binomial(d.v, t)) return std::nullopt;
  const long long lambda = count.begin()->second;
  for (const auto& kv : count)
    if (kv.second != lambda) return std::nullopt;
  return Int(lambda);
}

unsigned bender_design_degree(const BlockDesign& bender_design,
                              const PermGroup& line_sym) {
  if (line_sym.n != bender_design.v)
    throw std::invalid_argument("symmetry group acts on a different set");
  const unsigned k = std::min(bender_design.k, bender_design.v);
  unsigned degree = 0;
  for (unsigned t = k; t >= 1; --t)
    if (is_t_design(bender_design, t)) {
      degree = t;
      break;
    }
  const bool has_blocks =
      bender_design.block_count > 0 || !bender_design.blocks.empty();
  if (has_blocks) {
    unsigned hom = 0;
    for (unsigned h = 1; h <= k; ++h)
      if (is_k_homogeneous(line_sym, h)) hom = h;
    if (degree < hom)
      throw std::logic_error(
          "short-circuit design degree fell below the homogeneity of the "
          "line symmetry group");
  }
  return degree;
}

bool verify_short_circuits(const GramMatrix& g, const BlockDesign& d,
                           unsigned sample) {
  std::vector<std::vector<unsigned>> picks;
  if (!d.blocks.empty()) {
    // deterministic sample without replacement
    std::vector<size_t> order(d.blocks.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    for (size_t i = 0; i < order.size() && picks.size() < sample; ++i) {
      const size_t j = i + static_cast<size_t>(rng() % (order.size() - i));
      std::swap(order[i], order[j]);
      picks.push_back(d.blocks[order[i]]);
    }
  } else if (d.complete && d.block_count > 0) {
    // complete design: sample random sorted k-subsets
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    const unsigned long long want =
        d.block_count < Int(sample) ? d.block_count.convert_to<unsigned long long>()
                                    : sample;
    while (picks.size() < want) {
      std::vector<unsigned> blk;
      std::vector<char> used(d.v, 0);
      while (blk.size() < d.k) {
        const unsigned c = static_cast<unsigned>(rng() % d.v);
        if (!used[c]) {
          used[c] = 1;
          blk.push_back(c);
        }
      }
      std::sort(blk.begin(), blk.end());
      picks.push_back(std::move(blk));
    }
  }

  ExactMatrix em = to_exact_matrix(g.entries);
  auto rank = [&em](const std::vector<unsigned>& subset) {
    std::vector<int> idx(subset.begin(), subset.end());
    return exact_rank_subset(em, idx);
  };
  for (const auto& blk : picks) {
    const unsigned k = static_cast<unsigned>(blk.size());
    if (rank(blk) != k - 1) return false;
    std::vector<unsigned> sub(blk.begin() + 1, blk.end());
    for (unsigned drop = 0; drop < k; ++drop) {
      if (rank(sub) != k - 1) return false;
      if (drop + 1 < k) sub[drop] = blk[drop];
    }
  }
  return true;
}

MatroidReport matroid_report(const GramMatrix& g, const PermGroup& line_sym,
                             unsigned long long budget, unsigned jobs,
                             EnumStats* stats) {
  EnumStats local;
  MatroidReport rep;
  rep.bender = bender(g, budget, jobs, &local);
  rep.spark = rep.bender.k;
  const unsigned rank =
      static_cast<unsigned>(exact_rank(to_exact_matrix(g.entries)));
  rep.lower_bound_attained =
      g.n > rank && rep.spark >= 2 &&
      spark_lower_bound_attained(rank, g.n, rep.spark);
  if (!verify_short_circuits(g, rep.bender))
    throw std::logic_error("a sampled short circuit is not a circuit");
  rep.design_degree = bender_design_degree(rep.bender, line_sym);
  rep.binder_nonempty = binder(g, budget, jobs, &local).block_count > 0;
  if (stats) add_stats(*stats, local);
  return rep;
}

nlohmann::json MatroidReport::to_json() const {
  return nlohmann::json{{"kind", "matroid_report"},
                        {"spark", spark},
                        {"lower_bound_attained", lower_bound_attained},
                        {"bender", bender.to_json()},
                        {"design_degree", design_degree},
                        {"binder_nonempty", binder_nonempty}};
}

}  // namespace etf
