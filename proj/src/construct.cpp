#include "etf/construct.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "etf/gram_analysis.hpp"

namespace etf {

namespace {

nlohmann::json entries_to_json(
    const std::vector<std::vector<Cyclotomic>>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(e.to_json());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<Cyclotomic>> entries_from_json(
    const nlohmann::json& j, size_t rows, size_t cols, unsigned m) {
  if (!j.is_array() || j.size() != rows)
    throw std::invalid_argument("matrix JSON: wrong row count");
  std::vector<std::vector<Cyclotomic>> out;
  out.reserve(rows);
  for (const auto& rj : j) {
    if (!rj.is_array() || rj.size() != cols)
      throw std::invalid_argument("matrix JSON: wrong column count");
    std::vector<Cyclotomic> row;
    row.reserve(cols);
    for (const auto& ej : rj) {
      Cyclotomic e = Cyclotomic::from_json(ej);
      if (e.order() != m)
        throw std::invalid_argument("matrix JSON: entry order != m");
      row.push_back(std::move(e));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::string> labels_from_json(const nlohmann::json& j, size_t n) {
  if (!j.is_array() || j.size() != n)
    throw std::invalid_argument("matrix JSON: wrong label count");
  std::vector<std::string> out;
  out.reserve(n);
  for (const auto& s : j) out.push_back(s.get<std::string>());
  return out;
}

size_t choose2(size_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }
size_t choose3(size_t x) { return x < 3 ? 0 : x * (x - 1) * (x - 2) / 6; }

bool is_prime_long(long v) {
  if (v < 2) return false;
  for (long t = 2; t * t <= v; ++t)
    if (v % t == 0) return false;
  return true;
}

// Finite abelian group as a list of cyclic orders; elements are indexed
// lexicographically by their coordinate tuples (first factor most
// significant).
struct AbelianGroup {
  std::vector<unsigned> orders;
  unsigned n = 1;

  explicit AbelianGroup(const std::vector<unsigned>& ord) : orders(ord) {
    if (orders.empty())
      throw std::invalid_argument("group needs at least one cyclic factor");
    for (unsigned o : orders) {
      if (o < 2) throw std::invalid_argument("cyclic order must be >= 2");
      if (n > 4u * 1000 * 1000 / o)
        throw std::invalid_argument("group too large");
      n *= o;
    }
  }

  unsigned index_of(const std::vector<unsigned>& t) const {
    if (t.size() != orders.size())
      throw std::invalid_argument("group element has wrong arity");
    unsigned idx = 0;
    for (size_t i = 0; i < orders.size(); ++i) {
      if (t[i] >= orders[i])
        throw std::invalid_argument("group coordinate out of range");
      idx = idx * orders[i] + t[i];
    }
    return idx;
  }

  std::vector<unsigned> tuple_of(unsigned idx) const {
    std::vector<unsigned> t(orders.size());
    for (size_t i = orders.size(); i-- > 0;) {
      t[i] = idx % orders[i];
      idx /= orders[i];
    }
    return t;
  }

  unsigned add(unsigned a, unsigned b) const {
    std::vector<unsigned> ta = tuple_of(a), tb = tuple_of(b);
    for (size_t i = 0; i < orders.size(); ++i) ta[i] = (ta[i] + tb[i]) % orders[i];
    return index_of(ta);
  }

  unsigned sub(unsigned a, unsigned b) const {
    std::vector<unsigned> ta = tuple_of(a), tb = tuple_of(b);
    for (size_t i = 0; i < orders.size(); ++i)
      ta[i] = (ta[i] + orders[i] - tb[i]) % orders[i];
    return index_of(ta);
  }

  std::string label_of(unsigned idx) const {
    std::vector<unsigned> t = tuple_of(idx);
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(t[i]);
    }
    return s;
  }
};

std::vector<unsigned> subset_indices(
    const AbelianGroup& g, const std::vector<std::vector<unsigned>>& subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  std::vector<unsigned> idx;
  idx.reserve(subset.size());
  for (const auto& t : subset) idx.push_back(g.index_of(t));
  std::vector<unsigned> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("subset has repeated elements");
  return idx;
}

}  // namespace

// ---------------------------------------------------------------- JSON

nlohmann::json FrameMatrix::to_json() const {
  nlohmann::json lab = nlohmann::json::array();
  for (const auto& s : labels) lab.push_back(s);
  return nlohmann::json{{"kind", "frame"},   {"m", m},
                        {"d", d},            {"n", n},
                        {"labels", std::move(lab)},
                        {"entries", entries_to_json(entries)}};
}

FrameMatrix FrameMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("d") ||
      !j.contains("n") || !j.contains("labels") || !j.contains("entries"))
    throw std::invalid_argument("frame JSON needs m, d, n, labels, entries");
  FrameMatrix f;
  f.m = j.at("m").get<unsigned>();
  f.d = j.at("d").get<unsigned>();
  f.n = j.at("n").get<unsigned>();
  if (f.m == 0 || f.d == 0 || f.n < f.d)
    throw std::invalid_argument("frame JSON: need n >= d >= 1");
  f.labels = labels_from_json(j.at("labels"), f.n);
  f.entries = entries_from_json(j.at("entries"), f.d, f.n, f.m);
  return f;
}

nlohmann::json GramMatrix::to_json() const {
  nlohmann::json lab = nlohmann::json::array();
  for (const auto& s : labels) lab.push_back(s);
  return nlohmann::json{{"kind", "gram"},
                        {"m", m},
                        {"n", n},
                        {"labels", std::move(lab)},
                        {"entries", entries_to_json(entries)}};
}

GramMatrix GramMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("n") ||
      !j.contains("labels") || !j.contains("entries"))
    throw std::invalid_argument("gram JSON needs m, n, labels, entries");
  GramMatrix g;
  g.m = j.at("m").get<unsigned>();
  g.n = j.at("n").get<unsigned>();
  if (g.m == 0 || g.n == 0)
    throw std::invalid_argument("gram JSON: need n >= 1");
  g.labels = labels_from_json(j.at("labels"), g.n);
  g.entries = entries_from_json(j.at("entries"), g.n, g.n, g.m);
  for (unsigned a = 0; a < g.n; ++a) {
    if (g.entries[a][a] != g.entries[0][0] || !g.entries[a][a].is_real())
      throw std::invalid_argument("gram JSON: diagonal not real constant");
    for (unsigned b = a + 1; b < g.n; ++b)
      if (g.entries[a][b] != g.entries[b][a].conj())
        throw std::invalid_argument("gram JSON: not Hermitian");
  }
  return g;
}

// ---------------------------------------------------------- TripleTable

size_t TripleTable::rank_sorted(unsigned j, unsigned k, unsigned l) const {
  return choose3(n) - choose3(n - j) + choose2(n - 1 - j) - choose2(n - k) +
         (l - k - 1);
}

const Cyclotomic& TripleTable::value(unsigned a, unsigned b,
                                     unsigned c) const {
  if (a == b || b == c || a == c || a >= n || b >= n || c >= n)
    throw std::invalid_argument("triple product needs distinct indices");
  // Rotate the smallest index to the front (cyclic invariance).
  unsigned x = a, y = b, z = c;
  if (b < x) { x = b; y = c; z = a; }
  if (c < x) { x = c; y = a; z = b; }
  if (y < z) return fwd[rank_sorted(x, y, z)];
  return rev[rank_sorted(x, z, y)];
}

TripleTable TripleTable::from_gram(const GramMatrix& g) {
  TripleTable t;
  t.n = g.n;
  t.m = g.m;
  t.labels = g.labels;
  t.fwd.reserve(choose3(g.n));
  t.rev.reserve(choose3(g.n));
  for (unsigned j = 0; j < g.n; ++j)
    for (unsigned k = j + 1; k < g.n; ++k)
      for (unsigned l = k + 1; l < g.n; ++l) {
        Cyclotomic v = g.entries[j][k] * g.entries[k][l] * g.entries[l][j];
        t.rev.push_back(v.conj());
        t.fwd.push_back(std::move(v));
      }
  return t;
}

nlohmann::json TripleTable::to_json() const {
  nlohmann::json lab = nlohmann::json::array();
  for (const auto& s : labels) lab.push_back(s);
  nlohmann::json triples = nlohmann::json::array();
  size_t at = 0;
  for (unsigned j = 0; j < n; ++j)
    for (unsigned k = j + 1; k < n; ++k)
      for (unsigned l = k + 1; l < n; ++l) {
        triples.push_back(nlohmann::json{{"t", {j, k, l}},
                                         {"v", fwd[at].to_json()}});
        ++at;
      }
  return nlohmann::json{{"kind", "triple_table"},
                        {"m", m},
                        {"n", n},
                        {"labels", std::move(lab)},
                        {"triples", std::move(triples)}};
}

TripleTable TripleTable::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("n") ||
      !j.contains("triples"))
    throw std::invalid_argument("triple table JSON needs m, n, triples");
  TripleTable t;
  t.m = j.at("m").get<unsigned>();
  t.n = j.at("n").get<unsigned>();
  if (j.contains("labels") && !j.at("labels").empty())
    t.labels = labels_from_json(j.at("labels"), t.n);
  const auto& triples = j.at("triples");
  if (!triples.is_array() || triples.size() != choose3(t.n))
    throw std::invalid_argument("triple table JSON: wrong triple count");
  size_t at = 0;
  t.fwd.reserve(triples.size());
  t.rev.reserve(triples.size());
  for (unsigned a = 0; a < t.n; ++a)
    for (unsigned b = a + 1; b < t.n; ++b)
      for (unsigned c = b + 1; c < t.n; ++c) {
        const auto& row = triples[at];
        const auto& key = row.at("t");
        if (!key.is_array() || key.size() != 3 || key[0].get<unsigned>() != a ||
            key[1].get<unsigned>() != b || key[2].get<unsigned>() != c)
          throw std::invalid_argument(
              "triple table JSON: triples must be sorted lexicographically");
        Cyclotomic v = Cyclotomic::from_json(row.at("v"));
        if (v.order() != t.m)
          throw std::invalid_argument("triple table JSON: value order != m");
        t.rev.push_back(v.conj());
        t.fwd.push_back(std::move(v));
        ++at;
      }
  return t;
}

// ------------------------------------------------- Fourier / difference sets

FrameMatrix fourier_matrix(const std::vector<unsigned>& orders) {
  AbelianGroup g(orders);
  unsigned big = 1;
  for (unsigned o : orders) big = static_cast<unsigned>(std::lcm(big, o));
  FrameMatrix f;
  f.m = big;
  f.d = g.n;
  f.n = g.n;
  for (unsigned c = 0; c < g.n; ++c) f.labels.push_back(g.label_of(c));
  f.entries.assign(g.n, std::vector<Cyclotomic>());
  for (unsigned r = 0; r < g.n; ++r) {
    std::vector<unsigned> tr = g.tuple_of(r);
    std::vector<Cyclotomic>& row = f.entries[r];
    row.reserve(g.n);
    for (unsigned c = 0; c < g.n; ++c) {
      std::vector<unsigned> tc = g.tuple_of(c);
      long long e = 0;
      for (size_t i = 0; i < orders.size(); ++i)
        e += static_cast<long long>(big / orders[i]) * tr[i] * tc[i] % big;
      row.push_back(Cyclotomic::root_power(big, e));
    }
  }
  return f;
}

DiffSetVerdict is_difference_set(
    const std::vector<unsigned>& orders,
    const std::vector<std::vector<unsigned>>& subset) {
  AbelianGroup g(orders);
  std::vector<unsigned> idx = subset_indices(g, subset);
  DiffSetVerdict verdict;
  verdict.v = g.n;
  verdict.k = static_cast<unsigned>(idx.size());
  std::vector<unsigned> tally(g.n, 0);
  for (unsigned a : idx)
    for (unsigned b : idx)
      if (a != b) ++tally[g.sub(a, b)];
  // identity is index 0; every other index must carry one common count
  unsigned common = 0;
  bool first = true;
  for (unsigned e = 1; e < g.n; ++e) {
    if (first) {
      common = tally[e];
      first = false;
    } else if (tally[e] != common) {
      verdict.ok = false;
      verdict.message = "difference tally is non-uniform";
      return verdict;
    }
  }
  verdict.ok = true;
  verdict.lambda = common;
  return verdict;
}

FrameMatrix etf_from_difference_set(
    const std::vector<unsigned>& orders,
    const std::vector<std::vector<unsigned>>& subset) {
  DiffSetVerdict verdict = is_difference_set(orders, subset);
  if (!verdict.ok)
    throw std::invalid_argument("subset is not a difference set: " +
                                verdict.message);
  AbelianGroup g(orders);
  std::vector<unsigned> idx = subset_indices(g, subset);
  FrameMatrix full = fourier_matrix(orders);
  FrameMatrix f;
  f.m = full.m;
  f.d = static_cast<unsigned>(idx.size());
  f.n = full.n;
  f.labels = full.labels;
  for (unsigned r : idx) f.entries.push_back(full.entries[r]);
  GramMatrix gm = gram(f);
  if (!check_equiangular(gm).ok || !check_tight(gm).ok)
    throw std::logic_error(
        "difference-set frame failed the equiangular/tight assertion");
  return f;
}

BlockDesign development(const std::vector<unsigned>& orders,
                        const std::vector<std::vector<unsigned>>& subset) {
  DiffSetVerdict verdict = is_difference_set(orders, subset);
  if (!verdict.ok)
    throw std::invalid_argument("subset is not a difference set: " +
                                verdict.message);
  AbelianGroup g(orders);
  std::vector<unsigned> idx = subset_indices(g, subset);
  std::set<std::vector<unsigned>> blocks;
  for (unsigned shift = 0; shift < g.n; ++shift) {
    std::vector<unsigned> block;
    block.reserve(idx.size());
    for (unsigned a : idx) block.push_back(g.add(a, shift));
    std::sort(block.begin(), block.end());
    blocks.insert(std::move(block));
  }
  BlockDesign d;
  d.v = g.n;
  d.k = static_cast<unsigned>(idx.size());
  d.blocks.assign(blocks.begin(), blocks.end());
  d.block_count = Int(d.blocks.size());
  return d;
}

// ------------------------------------------------------------ Paley frames

FieldSpec paley_field(long q) {
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
  long p = 0;
  for (long t = 2; t * t <= q; ++t)
    if (q % t == 0) {
      p = t;
      break;
    }
  if (p == 0) p = q;  // q itself is prime
  int s = 0;
  long rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++s;
  }
  if (rest != 1)
    throw std::invalid_argument("field order must be a prime power");
  return FieldSpec::make(p, s);
}

FrameMatrix paley_etf(const FieldSpec& field) {
  if (!field.is_paley_admissible() || field.q() <= 3)
    throw std::invalid_argument(
        "Paley frame needs a field of order q = 3 (mod 4), q > 3");
  const long q = field.q();
  const unsigned p = static_cast<unsigned>(field.p());
  const unsigned d = static_cast<unsigned>((q - 1) / 2);
  FrameMatrix f;
  f.m = p;
  f.d = d;
  f.n = static_cast<unsigned>(q);
  std::vector<long> cols;
  cols.reserve(q);
  cols.push_back(0);
  for (long l = 0; l + 1 < q; ++l) cols.push_back(field.pow_alpha(l));
  for (long y : cols) f.labels.push_back(std::to_string(y));
  for (unsigned k = 0; k < d; ++k) {
    long x = field.pow_alpha(2L * k);
    std::vector<Cyclotomic> row;
    row.reserve(q);
    for (long y : cols) row.push_back(Cyclotomic::root_power(p, field.pairing(x, y)));
    f.entries.push_back(std::move(row));
  }
  return f;
}

PaleySymmetryGenerators paley_symmetry_generators(const FieldSpec& field) {
  FrameMatrix phi = paley_etf(field);
  const long q = field.q();
  const long p = field.p();
  const unsigned d = phi.d;

  PaleySymmetryGenerators out;
  out.q = q;
  out.p = p;
  out.s = field.s();
  out.d = d;
  out.col_elems.reserve(q);
  out.col_elems.push_back(0);
  for (long l = 0; l + 1 < q; ++l) out.col_elems.push_back(field.pow_alpha(l));

  std::vector<unsigned> pos_of(q, 0);
  for (unsigned i = 0; i < out.col_elems.size(); ++i)
    pos_of[out.col_elems[i]] = i;

  const auto& s_mat = field.intertwiner();
  const auto& s_inv = field.intertwiner_inverse();
  const long alpha_m2 = field.pow_alpha(-2);

  // Verifies the defining identity of one generator: applying the row
  // operator U to the frame must land, column by column, on the column of
  // the image element. `row_of` gives (U*Phi)'s row k as a row of Phi (or
  // -1 for a diagonal operator), `diag` the diagonal when row_of is null.
  auto verify = [&](const std::vector<Cyclotomic>* diag,
                    const std::vector<unsigned>* row_src,
                    const std::vector<unsigned>& perm) {
    for (unsigned k = 0; k < d; ++k) {
      const std::vector<Cyclotomic>& urow =
          row_src ? phi.entries[(*row_src)[k]] : phi.entries[k];
      for (unsigned i = 0; i < phi.n; ++i) {
        Cyclotomic lhs = diag ? (*diag)[k] * urow[i] : urow[i];
        if (lhs != phi.entries[k][perm[i]])
          throw std::logic_error("symmetry generator verification failed");
      }
    }
  };

  // Modulations: diagonal zeta^<x_k, b> with column action x -> x + b.
  for (unsigned t = 0; t < out.col_elems.size(); ++t) {
    const long b = out.col_elems[t];
    std::vector<Cyclotomic> diag;
    diag.reserve(d);
    for (unsigned k = 0; k < d; ++k) {
      long x = field.pow_alpha(2L * k);
      diag.push_back(Cyclotomic::root_power(static_cast<unsigned>(p),
                                            field.pairing(x, b)));
    }
    std::vector<unsigned> perm(phi.n);
    for (unsigned i = 0; i < phi.n; ++i)
      perm[i] = pos_of[field.add(out.col_elems[i], b)];
    verify(&diag, nullptr, perm);
    out.modulation_diagonals.push_back(std::move(diag));
    out.modulation_col_perms.push_back(std::move(perm));
  }

  // Quadratic-orbit translation T: cyclic row shift l -> l+1 paired with
  // the column action y -> S C^-2 S^-1 y.
  {
    out.translation_row_map.resize(d);
    std::vector<unsigned> row_src(d);
    for (unsigned l = 0; l < d; ++l) {
      out.translation_row_map[l] = (l + 1) % d;
      row_src[(l + 1) % d] = l;
    }
    out.translation_col_perm.resize(phi.n);
    for (unsigned i = 0; i < phi.n; ++i) {
      long y = out.col_elems[i];
      long img = field.apply_matrix(
          s_mat, field.mul(alpha_m2, field.apply_matrix(s_inv, y)));
      out.translation_col_perm[i] = pos_of[img];
    }
    verify(nullptr, &row_src, out.translation_col_perm);
  }

  // Galois permutation: row l -> p*l paired with y -> S((S^-1 y)^p).
  {
    out.galois_row_map.resize(d);
    std::vector<unsigned> row_src(d);
    for (unsigned l = 0; l < d; ++l) {
      unsigned img = static_cast<unsigned>((static_cast<long>(l) * p) % d);
      out.galois_row_map[l] = img;
      row_src[img] = l;
    }
    out.galois_col_perm.resize(phi.n);
    for (unsigned i = 0; i < phi.n; ++i) {
      long y = out.col_elems[i];
      long img = field.apply_matrix(
          s_mat, field.frobenius(field.apply_matrix(s_inv, y)));
      out.galois_col_perm[i] = pos_of[img];
    }
    verify(nullptr, &row_src, out.galois_col_perm);
  }
  return out;
}

nlohmann::json PaleySymmetryGenerators::to_json() const {
  nlohmann::json mods = nlohmann::json::array();
  for (size_t t = 0; t < modulation_col_perms.size(); ++t) {
    nlohmann::json diag = nlohmann::json::array();
    for (const auto& e : modulation_diagonals[t]) diag.push_back(e.to_json());
    mods.push_back(nlohmann::json{{"b", col_elems[t]},
                                  {"diagonal", std::move(diag)},
                                  {"col_perm", modulation_col_perms[t]}});
  }
  return nlohmann::json{
      {"kind", "paley_symmetry_generators"},
      {"q", q},
      {"p", p},
      {"s", s},
      {"d", d},
      {"col_elems", col_elems},
      {"modulations", std::move(mods)},
      {"translation",
       {{"row_map", translation_row_map}, {"col_perm", translation_col_perm}}},
      {"galois", {{"row_map", galois_row_map}, {"col_perm", galois_col_perm}}}};
}

// ------------------------------------------------------- small Gram builds

GramMatrix simplex_gram(unsigned n) {
  if (n < 2) throw std::invalid_argument("simplex needs n >= 2");
  GramMatrix g;
  g.m = 1;
  g.n = n;
  Cyclotomic diag = Cyclotomic::rational(1, Rat(static_cast<long>(n) - 1));
  Cyclotomic off = Cyclotomic::rational(1, Rat(-1));
  for (unsigned i = 0; i < n; ++i) {
    g.labels.push_back(std::to_string(i));
    std::vector<Cyclotomic> row(n, off);
    row[i] = diag;
    g.entries.push_back(std::move(row));
  }
  return g;
}

GramMatrix onb_gram(unsigned n) {
  if (n < 1) throw std::invalid_argument("orthonormal basis needs n >= 1");
  GramMatrix g;
  g.m = 1;
  g.n = n;
  Cyclotomic one = Cyclotomic::one(1);
  Cyclotomic zero = Cyclotomic::zero(1);
  for (unsigned i = 0; i < n; ++i) {
    g.labels.push_back(std::to_string(i));
    std::vector<Cyclotomic> row(n, zero);
    row[i] = one;
    g.entries.push_back(std::move(row));
  }
  return g;
}

GramMatrix naimark_gram(const GramMatrix& g, const Rat& a) {
  const unsigned n = g.n;
  Cyclotomic bound = Cyclotomic::rational(g.m, a);
  // exact tightness check against the provided bound: G^2 = A*G
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      Cyclotomic acc = Cyclotomic::zero(g.m);
      for (unsigned t = 0; t < n; ++t) acc += g.entries[i][t] * g.entries[t][j];
      if (acc != bound * g.entries[i][j])
        throw std::invalid_argument(
            "input Gram is not tight with the given frame bound");
    }
  GramMatrix c;
  c.m = g.m;
  c.n = n;
  c.labels = g.labels;
  bool all_zero = true;
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Cyclotomic> row;
    row.reserve(n);
    for (unsigned j = 0; j < n; ++j) {
      Cyclotomic e = i == j ? bound - g.entries[i][j] : -g.entries[i][j];
      if (!e.is_zero()) all_zero = false;
      row.push_back(std::move(e));
    }
    c.entries.push_back(std::move(row));
  }
  if (all_zero)
    throw std::invalid_argument(
        "degenerate complement: the Gram spans the whole space (n = d)");
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      Cyclotomic acc = Cyclotomic::zero(c.m);
      for (unsigned t = 0; t < n; ++t) acc += c.entries[i][t] * c.entries[t][j];
      if (acc != bound * c.entries[i][j])
        throw std::logic_error("complement failed its own tightness check");
    }
  return c;
}

GramMatrix conference_etf_gram(long q) {
  if (!is_prime_long(q) || q % 4 != 3)
    throw std::invalid_argument(
        "skew-conference Gram needs a prime q = 3 (mod 4)");
  FieldSpec field = FieldSpec::make(q, 1);
  const unsigned m = static_cast<unsigned>(q);
  Cyclotomic a = Cyclotomic::zero(m);
  for (long t = 1; t < q; ++t)
    if (field.is_qr(t)) a += Cyclotomic::root_power(m, t);
  Cyclotomic g = a - a.conj();
  if (g * g != Cyclotomic::rational(m, Rat(-q)))
    throw std::logic_error("quadratic Gauss element failed g^2 = -q");
  Cyclotomic g_over_q = g.scaled(Rat(1, q));
  const unsigned n = static_cast<unsigned>(q + 1);
  GramMatrix out;
  out.m = m;
  out.n = n;
  out.labels.push_back("inf");
  for (long x = 0; x < q; ++x) out.labels.push_back(std::to_string(x));
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Cyclotomic> row;
    row.reserve(n);
    for (unsigned j = 0; j < n; ++j) {
      if (i == j) {
        row.push_back(Cyclotomic::one(m));
        continue;
      }
      int sigma;
      if (i == 0) {
        sigma = 1;
      } else if (j == 0) {
        sigma = -1;
      } else {
        long diff = field.sub(static_cast<long>(i) - 1, static_cast<long>(j) - 1);
        sigma = field.is_qr(diff) ? 1 : -1;
      }
      row.push_back(g_over_q.scaled(Rat(sigma)));
    }
    out.entries.push_back(std::move(row));
  }
  return out;
}

// ------------------------------------------------------------ Gabor-Steiner

TripleTable gabor_steiner_tp_table(long p) {
  if (!is_prime_long(p) || p == 2)
    throw std::invalid_argument("Gabor-Steiner table needs an odd prime");
  const unsigned n = static_cast<unsigned>(p * p);
  TripleTable t;
  t.n = n;
  t.m = static_cast<unsigned>(p);
  for (unsigned i = 0; i < n; ++i)
    t.labels.push_back(std::to_string(i / p) + "," + std::to_string(i % p));
  const long half = (p + 1) / 2;
  auto omega = [](long a, long b, long c, long d) { return a * d - c * b; };
  t.fwd.reserve(choose3(n));
  t.rev.reserve(choose3(n));
  for (unsigned j = 0; j < n; ++j)
    for (unsigned k = j + 1; k < n; ++k)
      for (unsigned l = k + 1; l < n; ++l) {
        long k1 = j / p, c1 = j % p;
        long k2 = k / p, c2 = k % p;
        long k3 = l / p, c3 = l % p;
        long w = omega(k1, c1, k3, c3) + omega(k2, c2, k1, c1) +
                 omega(k3, c3, k2, c2);
        long e = w * half;
        t.fwd.push_back(Cyclotomic::root_power(t.m, e));
        t.rev.push_back(Cyclotomic::root_power(t.m, -e));
      }
  return t;
}

}  // namespace etf
