#include "etf/gram_analysis.hpp"

#include <map>
#include <stdexcept>

#include "etf/elimination.hpp"

namespace etf {

namespace {

// Dense value dictionary: ids assigned in sorted order of the exact values,
// so labelings are canonical and injective on distinct values.
struct ValueDict {
  std::map<Cyclotomic, int> ids;

  void see(const Cyclotomic& v) { ids.emplace(v, 0); }

  void freeze() {
    int next = 0;
    for (auto& kv : ids) kv.second = next++;
  }

  int id(const Cyclotomic& v) const { return ids.at(v); }

  std::vector<Cyclotomic> values() const {
    std::vector<Cyclotomic> out;
    out.reserve(ids.size());
    for (const auto& kv : ids) out.push_back(kv.first);
    return out;
  }

  std::vector<int> conj_involution() const {
    std::vector<int> out(ids.size());
    for (const auto& kv : ids) out[kv.second] = ids.at(kv.first.conj());
    return out;
  }
};

}  // namespace

GramMatrix gram(const FrameMatrix& frame) {
  GramMatrix g;
  g.m = frame.m;
  g.n = frame.n;
  g.labels = frame.labels;
  g.entries.assign(frame.n, std::vector<Cyclotomic>());
  std::vector<std::vector<Cyclotomic>> conj_cols(frame.n);
  for (unsigned j = 0; j < frame.n; ++j) {
    conj_cols[j].reserve(frame.d);
    for (unsigned r = 0; r < frame.d; ++r)
      conj_cols[j].push_back(frame.entries[r][j].conj());
  }
  for (unsigned j = 0; j < frame.n; ++j) {
    g.entries[j].reserve(frame.n);
    for (unsigned k = 0; k < frame.n; ++k) {
      Cyclotomic acc = Cyclotomic::zero(frame.m);
      for (unsigned r = 0; r < frame.d; ++r)
        acc += frame.entries[r][j] * conj_cols[k][r];
      g.entries[j].push_back(std::move(acc));
    }
  }
  for (unsigned j = 1; j < frame.n; ++j)
    if (g.entries[j][j] != g.entries[0][0])
      throw std::invalid_argument("frame columns are not equal-norm");
  return g;
}

EquiangularVerdict check_equiangular(const GramMatrix& g) {
  EquiangularVerdict verdict;
  verdict.value = Cyclotomic::zero(g.m);
  bool first = true;
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = j + 1; k < g.n; ++k) {
      Cyclotomic v = g.entries[j][k].abs_squared();
      if (first) {
        verdict.value = std::move(v);
        first = false;
      } else if (v != verdict.value) {
        verdict.ok = false;
        verdict.message = "off-diagonal magnitudes are not constant";
        return verdict;
      }
    }
  verdict.ok = true;
  return verdict;
}

TightVerdict check_tight(const GramMatrix& g) {
  TightVerdict verdict;
  verdict.bound = Cyclotomic::zero(g.m);
  ExactMatrix ex = to_exact_matrix(g.entries);
  verdict.rank = exact_rank(ex);
  Cyclotomic trace = Cyclotomic::zero(g.m);
  for (unsigned j = 0; j < g.n; ++j) trace += g.entries[j][j];
  if (trace.is_zero()) {
    verdict.message = "zero trace";
    return verdict;
  }
  Cyclotomic trace2 = Cyclotomic::zero(g.m);
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = 0; k < g.n; ++k)
      trace2 += g.entries[j][k] * g.entries[k][j];
  Cyclotomic bound = trace2 * trace.inverse();
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = 0; k < g.n; ++k) {
      Cyclotomic acc = Cyclotomic::zero(g.m);
      for (unsigned t = 0; t < g.n; ++t)
        acc += g.entries[j][t] * g.entries[t][k];
      if (acc != bound * g.entries[j][k]) {
        verdict.message = "G^2 differs from A*G";
        return verdict;
      }
    }
  verdict.ok = true;
  verdict.bound = std::move(bound);
  return verdict;
}

bool is_etf_gram(const GramMatrix& g) {
  return check_equiangular(g).ok && check_tight(g).ok;
}

Cyclotomic triple_product(const GramMatrix& g, unsigned j, unsigned k,
                          unsigned l) {
  if (j == k || k == l || j == l || j >= g.n || k >= g.n || l >= g.n)
    throw std::invalid_argument("triple product needs distinct indices");
  return g.entries[j][k] * g.entries[k][l] * g.entries[l][j];
}

UniformVerdict check_3c_uniform(const GramMatrix& g) {
  if (!is_etf_gram(g))
    throw std::invalid_argument("3c-uniformity is defined for ETF Grams");
  UniformVerdict verdict;
  verdict.value = Cyclotomic::zero(g.m);
  bool first = true;
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = j + 1; k < g.n; ++k)
      for (unsigned l = k + 1; l < g.n; ++l) {
        Cyclotomic tp = triple_product(g, j, k, l);
        Cyclotomic real_part = tp + tp.conj();
        if (first) {
          verdict.value = std::move(real_part);
          first = false;
        } else if (real_part != verdict.value) {
          verdict.ok = false;
          verdict.message = "triple-product real parts are not constant";
          return verdict;
        }
      }
  verdict.ok = true;
  return verdict;
}

PairLabelTable pair_labels(const GramMatrix& g) {
  PairLabelTable table;
  table.n = g.n;
  table.labels.assign(static_cast<size_t>(g.n) * g.n, -1);
  ValueDict dict;
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = 0; k < g.n; ++k)
      if (j != k) dict.see(g.entries[j][k]);
  dict.freeze();
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = 0; k < g.n; ++k)
      if (j != k) table.labels[j * g.n + k] = dict.id(g.entries[j][k]);
  table.value_of_label = dict.values();
  table.conj_label = dict.conj_involution();
  return table;
}

TripleLabelTable triple_labels(const TripleTable& t) {
  TripleLabelTable table;
  table.n = t.n;
  table.labels.assign(static_cast<size_t>(t.n) * t.n * t.n, -1);
  ValueDict dict;
  for (const Cyclotomic& v : t.fwd) dict.see(v);
  for (const Cyclotomic& v : t.rev) dict.see(v);
  dict.freeze();
  for (unsigned j = 0; j < t.n; ++j)
    for (unsigned k = 0; k < t.n; ++k) {
      if (k == j) continue;
      for (unsigned l = 0; l < t.n; ++l) {
        if (l == j || l == k) continue;
        table.labels[(static_cast<size_t>(j) * t.n + k) * t.n + l] =
            dict.id(t.value(j, k, l));
      }
    }
  table.value_of_label = dict.values();
  table.conj_label = dict.conj_involution();
  return table;
}

TripleLabelTable triple_labels(const GramMatrix& g) {
  return triple_labels(TripleTable::from_gram(g));
}

int paley_tp_class(const FieldSpec& field, long x, long y, long z) {
  if (x == y || y == z || x == z)
    throw std::invalid_argument("triple class needs distinct elements");
  const auto& s_inv = field.intertwiner_inverse();
  int count = 0;
  const long diffs[3] = {field.sub(x, y), field.sub(y, z), field.sub(z, x)};
  for (long delta : diffs)
    if (field.is_qr(field.apply_matrix(s_inv, delta))) ++count;
  return count;
}

bool switching_equivalent_aligned(const GramMatrix& g1, const GramMatrix& g2) {
  if (g1.n != g2.n)
    throw std::invalid_argument("aligned comparison needs equal sizes");
  if (!is_etf_gram(g1) || !is_etf_gram(g2))
    throw std::invalid_argument("switching equivalence is defined for ETFs");
  for (unsigned j = 0; j < g1.n; ++j)
    for (unsigned k = j + 1; k < g1.n; ++k)
      for (unsigned l = k + 1; l < g1.n; ++l)
        if (triple_product(g1, j, k, l) != triple_product(g2, j, k, l))
          return false;
  return true;
}

}  // namespace etf
