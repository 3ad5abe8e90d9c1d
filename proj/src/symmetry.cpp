#include "etf/symmetry.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace etf {

namespace {

bool is_odd_prime(long v) {
  if (v < 3 || v % 2 == 0) return false;
  for (long t = 3; t * t <= v; t += 2)
    if (v % t == 0) return false;
  return true;
}

uint64_t mix_hash(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_sorted(std::vector<long long> vals) {
  std::sort(vals.begin(), vals.end());
  uint64_t h = 0xcbf29ce484222325ULL;
  for (long long v : vals) h = mix_hash(h, static_cast<uint64_t>(v));
  return h;
}

// One side of the search: a pair or triple labeling with labels mapped
// into a common integer space (the translation is only non-trivial for
// cross-table isomorphism search).
struct LabelView {
  unsigned n = 0;
  bool triple = false;
  const PairLabelTable* pt = nullptr;
  const TripleLabelTable* tt = nullptr;
  const std::vector<long long>* translate = nullptr;

  long long pair_label(unsigned a, unsigned b) const {
    return pt->at(a, b);
  }
  long long triple_label(unsigned a, unsigned b, unsigned c) const {
    int raw = tt->at(a, b, c);
    return translate ? (*translate)[raw] : raw;
  }
};

// Static sigma-invariants of a labeling: a hash per vertex, and (in triple
// mode) a hash per ordered pair of the multiset of triple labels over the
// third point. Any automorphism/isomorphism must match them.
struct Invariants {
  std::vector<uint64_t> vertex;  // n
  std::vector<uint64_t> pair;    // n*n, triple mode only

  explicit Invariants(const LabelView& v) {
    const unsigned n = v.n;
    vertex.assign(n, 0);
    if (v.triple) {
      pair.assign(static_cast<size_t>(n) * n, 0);
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (b == a) continue;
          std::vector<long long> around;
          around.reserve(n - 2);
          for (unsigned x = 0; x < n; ++x)
            if (x != a && x != b) around.push_back(v.triple_label(a, b, x));
          pair[static_cast<size_t>(a) * n + b] = hash_sorted(std::move(around));
        }
      for (unsigned a = 0; a < n; ++a) {
        std::vector<long long> row;
        row.reserve(n - 1);
        for (unsigned b = 0; b < n; ++b)
          if (b != a)
            row.push_back(static_cast<long long>(
                pair[static_cast<size_t>(a) * n + b]));
        vertex[a] = hash_sorted(std::move(row));
      }
    } else {
      for (unsigned a = 0; a < n; ++a) {
        std::vector<long long> row;
        row.reserve(n - 1);
        for (unsigned b = 0; b < n; ++b)
          if (b != a) row.push_back(v.pair_label(a, b));
        vertex[a] = hash_sorted(std::move(row));
      }
    }
  }
};

// Backtracking mapper from `dom` onto `img` preserving labels; supports
// completion of a partial assignment (used both for automorphism
// generators and cross-table isomorphism).
struct Mapper {
  const LabelView& dom;
  const LabelView& img;
  const Invariants& idom;
  const Invariants& iimg;
  std::vector<unsigned> base;  // placement order of domain points
  std::vector<int> sigma;      // domain point -> image point or -1
  std::vector<char> used;      // image side
  std::vector<unsigned> placed;

  Mapper(const LabelView& d, const LabelView& i, const Invariants& id,
         const Invariants& ii, std::vector<unsigned> base_order)
      : dom(d),
        img(i),
        idom(id),
        iimg(ii),
        base(std::move(base_order)),
        sigma(d.n, -1),
        used(d.n, 0) {}

  void reset() {
    std::fill(sigma.begin(), sigma.end(), -1);
    std::fill(used.begin(), used.end(), 0);
    placed.clear();
  }

  void place(unsigned a, unsigned w) {
    sigma[a] = static_cast<int>(w);
    used[w] = 1;
    placed.push_back(a);
  }

  void unplace(unsigned a) {
    used[sigma[a]] = 0;
    sigma[a] = -1;
    placed.pop_back();
  }

  bool feasible(unsigned a, unsigned w) const {
    if (used[w]) return false;
    if (idom.vertex[a] != iimg.vertex[w]) return false;
    const unsigned n = dom.n;
    if (dom.triple) {
      for (unsigned u : placed) {
        unsigned su = static_cast<unsigned>(sigma[u]);
        if (idom.pair[static_cast<size_t>(a) * n + u] !=
            iimg.pair[static_cast<size_t>(w) * n + su])
          return false;
      }
      for (size_t i = 0; i < placed.size(); ++i)
        for (size_t j = i + 1; j < placed.size(); ++j) {
          unsigned u1 = placed[i], u2 = placed[j];
          if (dom.triple_label(a, u1, u2) !=
              img.triple_label(w, static_cast<unsigned>(sigma[u1]),
                               static_cast<unsigned>(sigma[u2])))
            return false;
        }
    } else {
      for (unsigned u : placed) {
        unsigned su = static_cast<unsigned>(sigma[u]);
        if (dom.pair_label(a, u) != img.pair_label(w, su)) return false;
      }
    }
    return true;
  }

  // Completes the assignment over base[depth..]; leaves the found map in
  // `sigma` on success.
  bool complete(size_t depth) {
    if (depth == base.size()) return true;
    unsigned a = base[depth];
    for (unsigned w = 0; w < dom.n; ++w) {
      if (!feasible(a, w)) continue;
      place(a, w);
      if (complete(depth + 1)) return true;
      unplace(a);
    }
    return false;
  }
};

// Placement order: most-constrained vertices first (smallest invariant
// class), ties by index, for a deterministic base.
std::vector<unsigned> make_base(const Invariants& inv, unsigned n) {
  std::map<uint64_t, unsigned> class_size;
  for (unsigned a = 0; a < n; ++a) ++class_size[inv.vertex[a]];
  std::vector<unsigned> base(n);
  for (unsigned a = 0; a < n; ++a) base[a] = a;
  std::stable_sort(base.begin(), base.end(), [&](unsigned x, unsigned y) {
    unsigned cx = class_size[inv.vertex[x]], cy = class_size[inv.vertex[y]];
    if (cx != cy) return cx < cy;
    return x < y;
  });
  return base;
}

// Orbit of `start` under a set of permutations.
std::vector<char> point_orbit(unsigned n, unsigned start,
                              const std::vector<Permutation>& gens) {
  std::vector<char> in(n, 0);
  std::queue<unsigned> q;
  in[start] = 1;
  q.push(start);
  while (!q.empty()) {
    unsigned x = q.front();
    q.pop();
    for (const Permutation& g : gens) {
      unsigned y = g(x);
      if (!in[y]) {
        in[y] = 1;
        q.push(y);
      }
      unsigned z = g.inverse()(x);
      if (!in[z]) {
        in[z] = 1;
        q.push(z);
      }
    }
  }
  return in;
}

// Automorphism search by stabilizer-chain orbit counting: processes the
// base bottom-up; at each level finds the orbit of the base point within
// the stabilizer of the earlier base points, one completion search per
// orbit candidate outside the closure of the generators found so far.
struct AutoSearch {
  const LabelView& view;
  const Invariants& inv;
  std::vector<unsigned> base;
  std::vector<std::vector<Permutation>> level_gens;
  Int order = 1;

  AutoSearch(const LabelView& v, const Invariants& i)
      : view(v), inv(i), base(make_base(i, v.n)), level_gens(v.n) {}

  std::vector<Permutation> gens_from_level(size_t lvl) const {
    std::vector<Permutation> out;
    for (size_t j = lvl; j < level_gens.size(); ++j)
      for (const Permutation& g : level_gens[j]) out.push_back(g);
    return out;
  }

  void run() {
    const unsigned n = view.n;
    Mapper mapper(view, view, inv, inv, base);
    for (size_t lvl = n; lvl-- > 0;) {
      unsigned bp = base[lvl];
      // candidate images of base[lvl] with the earlier base points fixed
      mapper.reset();
      for (size_t j = 0; j < lvl; ++j) mapper.place(base[j], base[j]);
      std::vector<unsigned> candidates;
      for (unsigned w = 0; w < n; ++w)
        if (w != bp && mapper.feasible(bp, w)) candidates.push_back(w);

      std::vector<char> orbit = point_orbit(n, bp, gens_from_level(lvl));
      for (unsigned w : candidates) {
        if (orbit[w]) continue;
        mapper.place(bp, w);
        if (mapper.complete(lvl + 1)) {
          Permutation g;
          g.images.assign(mapper.sigma.begin(), mapper.sigma.end());
          level_gens[lvl].push_back(std::move(g));
          orbit = point_orbit(n, bp, gens_from_level(lvl));
        }
        // rewind to the identity prefix (complete() may have left a full
        // assignment in place)
        while (mapper.placed.size() > lvl) mapper.unplace(mapper.placed.back());
      }
      unsigned orbit_size = 0;
      for (char c : orbit) orbit_size += c;
      order *= orbit_size;
    }
  }
};

std::vector<Permutation> canonical_generators(std::vector<Permutation> gens) {
  gens.erase(std::remove_if(gens.begin(), gens.end(),
                            [](const Permutation& g) { return g.is_identity(); }),
             gens.end());
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

Int factorial(unsigned n) {
  Int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

// Materializes elements by closure when the known order fits the cap.
void materialize_if_small(PermGroup& g, size_t cap) {
  if (g.order <= 0 || g.order > Int(cap)) return;
  std::set<Permutation> seen;
  std::queue<Permutation> q;
  Permutation id = Permutation::identity(g.n);
  seen.insert(id);
  q.push(id);
  while (!q.empty()) {
    Permutation x = q.front();
    q.pop();
    for (const Permutation& gen : g.generators) {
      Permutation y = gen.after(x);
      if (seen.insert(y).second) q.push(y);
    }
  }
  if (Int(seen.size()) != g.order)
    throw std::logic_error("group closure does not match the computed order");
  g.elements.assign(seen.begin(), seen.end());
  g.materialized = true;
}

PermGroup finish_search_group(unsigned n, std::vector<Permutation> gens,
                              Int order, size_t cap) {
  PermGroup g;
  g.n = n;
  g.generators = canonical_generators(std::move(gens));
  g.order = std::move(order);
  materialize_if_small(g, cap);
  return g;
}

PermGroup symmetric_group(unsigned n, size_t cap) {
  PermGroup g;
  g.n = n;
  g.full_symmetric = true;
  g.order = factorial(n);
  if (n >= 2) {
    Permutation swap01 = Permutation::identity(n);
    std::swap(swap01.images[0], swap01.images[1]);
    Permutation cycle = Permutation::identity(n);
    for (unsigned i = 0; i < n; ++i) cycle.images[i] = (i + 1) % n;
    g.generators = canonical_generators({swap01, cycle});
  }
  materialize_if_small(g, cap);
  return g;
}

// Orbit of one ordered k-tuple under the generators; true iff it reaches
// every ordered k-tuple of distinct points.
bool tuple_orbit_full(const PermGroup& g, unsigned k) {
  const unsigned n = g.n;
  unsigned long long target = 1;
  for (unsigned i = 0; i < k; ++i) target *= (n - i);
  unsigned long long space = 1;
  for (unsigned i = 0; i < k; ++i) {
    space *= n;
    if (space > 50'000'000ULL)
      throw std::runtime_error("ordered-tuple space too large");
  }
  std::vector<char> seen(space, 0);
  auto encode = [n](const std::vector<unsigned>& t) {
    unsigned long long c = 0;
    for (unsigned x : t) c = c * n + x;
    return c;
  };
  std::vector<unsigned> start(k);
  for (unsigned i = 0; i < k; ++i) start[i] = i;
  std::queue<std::vector<unsigned>> q;
  seen[encode(start)] = 1;
  q.push(start);
  unsigned long long count = 1;
  while (!q.empty()) {
    std::vector<unsigned> t = q.front();
    q.pop();
    for (const Permutation& gen : g.generators) {
      std::vector<unsigned> u(k);
      for (unsigned i = 0; i < k; ++i) u[i] = gen(t[i]);
      unsigned long long c = encode(u);
      if (!seen[c]) {
        seen[c] = 1;
        ++count;
        q.push(std::move(u));
      }
    }
  }
  return count == target;
}

bool subset_orbit_full(const PermGroup& g, unsigned k) {
  const unsigned n = g.n;
  Int target = binomial(n, k);
  std::vector<unsigned> start(k);
  for (unsigned i = 0; i < k; ++i) start[i] = i;
  std::set<std::vector<unsigned>> seen;
  std::queue<std::vector<unsigned>> q;
  seen.insert(start);
  q.push(start);
  while (!q.empty()) {
    std::vector<unsigned> t = q.front();
    q.pop();
    for (const Permutation& gen : g.generators) {
      std::vector<unsigned> u(k);
      for (unsigned i = 0; i < k; ++i) u[i] = gen(t[i]);
      std::sort(u.begin(), u.end());
      if (seen.size() > 50'000'000ULL)
        throw std::runtime_error("subset space too large");
      if (seen.insert(u).second) q.push(std::move(u));
    }
  }
  return Int(seen.size()) == target;
}

}  // namespace

// ------------------------------------------------------------ Permutation

Permutation Permutation::identity(unsigned n) {
  Permutation p;
  p.images.resize(n);
  for (unsigned i = 0; i < n; ++i) p.images[i] = i;
  return p;
}

bool Permutation::is_identity() const {
  for (unsigned i = 0; i < images.size(); ++i)
    if (images[i] != i) return false;
  return true;
}

Permutation Permutation::after(const Permutation& first) const {
  if (images.size() != first.images.size())
    throw std::invalid_argument("composing permutations of different sizes");
  Permutation r;
  r.images.resize(images.size());
  for (unsigned i = 0; i < images.size(); ++i)
    r.images[i] = images[first.images[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images.resize(images.size());
  for (unsigned i = 0; i < images.size(); ++i) r.images[images[i]] = i;
  return r;
}

// --------------------------------------------------------------- PermGroup

bool PermGroup::contains(const Permutation& p) const {
  if (p.images.size() != n) return false;
  if (full_symmetric) return true;
  if (!materialized)
    throw std::runtime_error(
        "membership test needs materialized elements (group too large)");
  return std::binary_search(elements.begin(), elements.end(), p);
}

nlohmann::json PermGroup::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const Permutation& g : generators) gens.push_back(g.images);
  return nlohmann::json{{"n", n},
                        {"order", int_str(order)},
                        {"generators", std::move(gens)},
                        {"full_symmetric", full_symmetric},
                        {"materialized", materialized},
                        {"truncated", truncated}};
}

PermGroup group_from_generators(unsigned n, std::vector<Permutation> gens,
                                size_t element_cap) {
  for (const Permutation& g : gens) {
    if (g.images.size() != n)
      throw std::invalid_argument("generator size mismatch");
    std::vector<char> hit(n, 0);
    for (unsigned v : g.images) {
      if (v >= n || hit[v])
        throw std::invalid_argument("generator is not a bijection");
      hit[v] = 1;
    }
  }
  PermGroup g;
  g.n = n;
  g.generators = canonical_generators(std::move(gens));
  // closure with an online cap
  std::set<Permutation> seen;
  std::queue<Permutation> q;
  Permutation id = Permutation::identity(n);
  seen.insert(id);
  q.push(id);
  while (!q.empty()) {
    if (seen.size() > element_cap) {
      g.truncated = true;
      g.order = 0;
      g.elements.clear();
      return g;
    }
    Permutation x = q.front();
    q.pop();
    for (const Permutation& gen : g.generators) {
      Permutation y = gen.after(x);
      if (seen.insert(y).second) q.push(y);
    }
  }
  g.order = Int(seen.size());
  g.elements.assign(seen.begin(), seen.end());
  g.materialized = true;
  return g;
}

// ------------------------------------------------------- symmetry searches

PermGroup vector_symmetry_group(const PairLabelTable& t, size_t element_cap) {
  if (t.n < 2 || t.value_of_label.size() <= 1)
    return symmetric_group(t.n, element_cap);
  LabelView view;
  view.n = t.n;
  view.triple = false;
  view.pt = &t;
  Invariants inv(view);
  AutoSearch search(view, inv);
  search.run();
  std::vector<Permutation> gens;
  for (const auto& lv : search.level_gens)
    for (const Permutation& g : lv) gens.push_back(g);
  return finish_search_group(t.n, std::move(gens), search.order, element_cap);
}

PermGroup line_symmetry_group(const TripleLabelTable& t, size_t element_cap) {
  if (t.n < 3 || t.value_of_label.size() <= 1)
    return symmetric_group(t.n, element_cap);
  LabelView view;
  view.n = t.n;
  view.triple = true;
  view.tt = &t;
  Invariants inv(view);
  AutoSearch search(view, inv);
  search.run();
  std::vector<Permutation> gens;
  for (const auto& lv : search.level_gens)
    for (const Permutation& g : lv) gens.push_back(g);
  return finish_search_group(t.n, std::move(gens), search.order, element_cap);
}

// --------------------------------------------------------- expected groups

PermGroup agl_subgroup(const FieldSpec& field, size_t element_cap) {
  if (!field.is_paley_admissible())
    throw std::invalid_argument(
        "the affine residue group needs q = 3 (mod 4)");
  const long q = field.q();
  const long p = field.p();
  const int s = field.s();
  // position <-> element code under the frame's column order
  std::vector<long> col_elems;
  col_elems.reserve(q);
  col_elems.push_back(0);
  for (long l = 0; l + 1 < q; ++l) col_elems.push_back(field.pow_alpha(l));
  std::vector<unsigned> pos_of(q, 0);
  for (unsigned i = 0; i < col_elems.size(); ++i) pos_of[col_elems[i]] = i;

  auto perm_from_map = [&](auto&& f) {
    Permutation g;
    g.images.resize(q);
    for (unsigned i = 0; i < col_elems.size(); ++i)
      g.images[i] = pos_of[f(col_elems[i])];
    return g;
  };

  std::vector<Permutation> gens;
  long basis = 1;
  for (int i = 0; i < s; ++i) {
    gens.push_back(
        perm_from_map([&](long x) { return field.add(x, basis); }));
    basis *= p;
  }
  const auto& s_mat = field.intertwiner();
  const auto& s_inv = field.intertwiner_inverse();
  const long alpha2 = field.pow_alpha(2);
  gens.push_back(perm_from_map([&](long x) {
    return field.apply_matrix(s_mat,
                              field.mul(alpha2, field.apply_matrix(s_inv, x)));
  }));
  gens.push_back(perm_from_map([&](long x) {
    return field.apply_matrix(s_mat,
                              field.frobenius(field.apply_matrix(s_inv, x)));
  }));

  PermGroup g = group_from_generators(static_cast<unsigned>(q),
                                      std::move(gens), element_cap);
  Int expect = Int(q) * ((q - 1) / 2) * s;
  if (g.truncated || g.order != expect)
    throw std::logic_error("affine residue group has unexpected order");
  return g;
}

PermGroup asp_group(long p, size_t element_cap) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("affine symplectic group needs an odd prime");
  const unsigned n = static_cast<unsigned>(p * p);
  auto idx = [p](long a, long b) {
    return static_cast<unsigned>(((a % p + p) % p) * p + ((b % p + p) % p));
  };
  auto perm_from_map = [&](auto&& f) {
    Permutation g;
    g.images.resize(n);
    for (long a = 0; a < p; ++a)
      for (long b = 0; b < p; ++b) g.images[idx(a, b)] = f(a, b);
    return g;
  };
  std::vector<Permutation> gens;
  gens.push_back(perm_from_map([&](long a, long b) { return idx(a + 1, b); }));
  gens.push_back(perm_from_map([&](long a, long b) { return idx(a, b + 1); }));
  // SL(2,p) generators [[1,1],[0,1]] and [[1,0],[1,1]] acting on column
  // vectors (a,b)
  gens.push_back(perm_from_map([&](long a, long b) { return idx(a + b, b); }));
  gens.push_back(perm_from_map([&](long a, long b) { return idx(a, a + b); }));

  PermGroup g = group_from_generators(n, std::move(gens), element_cap);
  Int expect = Int(p) * p * p * (Int(p) * p - 1);
  if (g.truncated || g.order != expect)
    throw std::logic_error("affine symplectic group has unexpected order");
  return g;
}

// ----------------------------------------------------- group-level queries

bool is_k_transitive(const PermGroup& g, unsigned k) {
  if (k == 0 || k > g.n) throw std::invalid_argument("need 1 <= k <= n");
  if (g.full_symmetric) return true;
  return tuple_orbit_full(g, k);
}

bool is_k_homogeneous(const PermGroup& g, unsigned k) {
  if (k == 0 || k > g.n) throw std::invalid_argument("need 1 <= k <= n");
  if (g.full_symmetric) return true;
  return subset_orbit_full(g, k);
}

bool groups_equal(const PermGroup& g1, const PermGroup& g2) {
  if (g1.n != g2.n) throw std::invalid_argument("groups on different sets");
  if (g1.truncated || g2.truncated)
    throw std::runtime_error("cannot compare truncated groups");
  if (g1.order != g2.order) return false;
  if (g1.full_symmetric && g2.full_symmetric) return true;
  return is_subgroup(g2, g1);
}

bool is_subgroup(const PermGroup& sub, const PermGroup& super) {
  if (sub.n != super.n) throw std::invalid_argument("groups on different sets");
  if (sub.truncated || super.truncated)
    throw std::runtime_error("cannot compare truncated groups");
  if (super.full_symmetric) return true;
  for (const Permutation& g : sub.generators)
    if (!super.contains(g)) return false;
  return true;
}

// -------------------------------------------------- cross-table isomorphism

std::optional<Permutation> find_tp_isomorphism(const TripleLabelTable& t1,
                                               const TripleLabelTable& t2) {
  if (t1.n != t2.n)
    throw std::invalid_argument("tables on different index sets");
  const unsigned n = t1.n;
  if (n < 3) return Permutation::identity(n);

  // translate t2's labels into t1's label space by exact value equality;
  // values missing from t1 get sentinels no t1 label can ever match
  std::map<Cyclotomic, long long> value_to_common;
  for (size_t l = 0; l < t1.value_of_label.size(); ++l)
    value_to_common[t1.value_of_label[l]] = static_cast<long long>(l);
  std::vector<long long> translate(t2.value_of_label.size());
  for (size_t l = 0; l < t2.value_of_label.size(); ++l) {
    auto it = value_to_common.find(t2.value_of_label[l]);
    translate[l] = it != value_to_common.end()
                       ? it->second
                       : -2 - static_cast<long long>(l);
  }

  LabelView dom;
  dom.n = n;
  dom.triple = true;
  dom.tt = &t1;
  LabelView img;
  img.n = n;
  img.triple = true;
  img.tt = &t2;
  img.translate = &translate;
  Invariants idom(dom), iimg(img);
  Mapper mapper(dom, img, idom, iimg, make_base(idom, n));
  if (!mapper.complete(0)) return std::nullopt;
  Permutation out;
  out.images.assign(mapper.sigma.begin(), mapper.sigma.end());
  return out;
}

}  // namespace etf
