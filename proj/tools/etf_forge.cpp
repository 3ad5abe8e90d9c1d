// Command-line front end: exact constructions, analysis verdicts, symmetry
// groups, and matroid enumeration, all reported as deterministic JSON.
//
// Exit codes: 0 all checks pass; 1 usage or input error; 2 a verified
// assertion failed (a red flag for the implementation); 3 work refused on
// budget or scope grounds, with a budget report.
#include <CLI11.hpp>
#include <json.hpp>

#include "etf/construct.hpp"
#include "etf/design.hpp"
#include "etf/elimination.hpp"
#include "etf/finite_field.hpp"
#include "etf/gram_analysis.hpp"
#include "etf/matroid.hpp"
#include "etf/report.hpp"
#include "etf/symmetry.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace etf;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertFailed = 2;
constexpr int kExitRefused = 3;

// Exact construction work guard (result entries x coefficient dimension):
// frames beyond this are declined rather than half-built.
constexpr unsigned long long kConstructWorkCap = 5'000'000ULL;

unsigned long long default_budget() {
  if (const char* env = std::getenv("ETF_FORGE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (env[0] == '\0' || end == nullptr || *end != '\0' || v == 0)
      throw std::invalid_argument(
          "ETF_FORGE_BUDGET must be a positive integer");
    return v;
  }
  return kDefaultEnumBudget;
}

std::string rat_str(const Rat& r) {
  std::string s = rat_num_str(r);
  if (rat_den_str(r) != "1") s += "/" + rat_den_str(r);
  return s;
}

bool is_prime_ll(long v) {
  if (v < 2) return false;
  for (long f = 2; f * f <= v; ++f)
    if (v % f == 0) return false;
  return true;
}

// q = p^s with p prime, s >= 1.
std::optional<std::pair<long, int>> prime_power(long q) {
  if (q < 2) return std::nullopt;
  long p = q;
  for (long f = 2; f * f <= q; ++f)
    if (q % f == 0) {
      p = f;
      break;
    }
  long rest = q;
  int s = 0;
  while (rest % p == 0) {
    rest /= p;
    ++s;
  }
  if (rest != 1) return std::nullopt;
  return std::make_pair(p, s);
}

unsigned long long totient_prime_power(long p, int s) {
  unsigned long long q = 1;
  for (int i = 0; i < s; ++i) q *= static_cast<unsigned long long>(p);
  return q - q / static_cast<unsigned long long>(p);
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty list entry");
    out.push_back(std::stol(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<unsigned> parse_unsigned_list(const std::string& text) {
  std::vector<unsigned> out;
  for (long v : parse_long_list(text)) {
    if (v < 0) throw std::invalid_argument("expected a nonnegative integer");
    out.push_back(static_cast<unsigned>(v));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (long v : parse_long_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// Group elements: tuples separated by ';', coordinates by ','. A bare
// comma list is accepted for rank-1 groups (each entry one element).
std::vector<std::vector<unsigned>> parse_element_list(const std::string& text,
                                                      size_t arity) {
  std::vector<std::vector<unsigned>> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    std::vector<unsigned> tuple = parse_unsigned_list(tok);
    if (arity == 1 && tuple.size() > 1) {
      for (unsigned v : tuple) out.push_back({v});
    } else {
      if (tuple.size() != arity)
        throw std::invalid_argument(
            "element arity does not match the group rank");
      out.push_back(std::move(tuple));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty element list");
  return out;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

GramMatrix load_gram(const std::string& path) {
  nlohmann::json j = load_json_file(path);
  const std::string kind = j.is_object() ? j.value("kind", "") : "";
  if (kind == "frame") return gram(FrameMatrix::from_json(j));
  if (kind == "gram" || kind.empty()) return GramMatrix::from_json(j);
  throw std::invalid_argument("input is a '" + kind +
                              "', expected a frame or gram");
}

// Triple label table from a frame, gram, or stored triple table.
TripleLabelTable load_triples(const std::string& path) {
  nlohmann::json j = load_json_file(path);
  const std::string kind = j.is_object() ? j.value("kind", "") : "";
  if (kind == "triple_table") return triple_labels(TripleTable::from_json(j));
  if (kind == "frame") return triple_labels(gram(FrameMatrix::from_json(j)));
  return triple_labels(GramMatrix::from_json(j));
}

void write_payload(const nlohmann::json& payload, const std::string& out) {
  if (out.empty()) {
    std::cout << payload.dump(2) << "\n";
    return;
  }
  std::ofstream o(out);
  if (!o) throw std::invalid_argument("cannot write output file: " + out);
  o << payload.dump(2) << "\n";
}

// Prints the envelope and derives the exit code: failed checks outrank
// refusals; refusals outrank success.
int finish(const ReportEnvelope& env) {
  std::cout << env.to_json().dump(2) << "\n";
  bool failed = false;
  bool refused = false;
  for (const auto& r : env.results) {
    const bool rfd = r.data.is_object() && r.data.value("refused", false);
    refused = refused || rfd;
    failed = failed || (!r.ok && !rfd);
  }
  if (failed) return kExitAssertFailed;
  if (refused) return kExitRefused;
  return kExitPass;
}

nlohmann::json refusal_data(const BudgetExceeded& e) {
  return nlohmann::json{{"refused", true},
                        {"needed_subset_checks", int_str(e.needed)},
                        {"enumeration_budget", e.budget},
                        {"size_refused", e.size_refused},
                        {"certified_spark_lower_bound", e.best_lower_bound}};
}

// Mod-p matrix product, for the intertwiner verification.
std::vector<std::vector<int>> modp_mul(long p,
                                       const std::vector<std::vector<int>>& a,
                                       const std::vector<std::vector<int>>& b) {
  const size_t n = a.size();
  std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j)
        c[i][j] = static_cast<int>(
            (c[i][j] + 1L * a[i][k] * b[k][j]) % p);
  return c;
}

// ---------------------------------------------------------------- field

int run_field(long p, int s, const std::string& modulus_csv) {
  FieldSpec f = modulus_csv.empty()
                    ? FieldSpec::make(p, s)
                    : FieldSpec::make_with_modulus(p, s,
                                                   parse_int_list(modulus_csv));
  ReportEnvelope env;
  env.command = "field";
  env.inputs = {{"p", p}, {"s", s}};
  if (!modulus_csv.empty()) env.inputs["modulus"] = modulus_csv;

  env.add("field-spec", true, f.to_json());

  if (!f.is_paley_admissible()) {
    env.add("paley-admissibility", true,
            {{"admissible", false}, {"reason", "q % 4 != 3"}});
    return finish(env);
  }

  nlohmann::json codes = nlohmann::json::array();
  nlohmann::json tuples = nlohmann::json::array();
  for (long c : f.qr_codes()) {
    codes.push_back(c);
    tuples.push_back(f.decode(c).coords);
  }
  env.add("quadratic-residues", true,
          {{"count", (f.q() - 1) / 2},
           {"codes", std::move(codes)},
           {"coordinates", std::move(tuples)}});

  nlohmann::json orbit = nlohmann::json::array();
  for (const FfElt& e : f.normal_basis_orbit()) orbit.push_back(e.coords);
  env.add("normal-basis", true,
          {{"b", f.normal_basis_b()},
           {"residue", f.normal_basis_residue().coords},
           {"galois_orbit", std::move(orbit)}});

  const auto& S = f.intertwiner();
  const auto& C = f.companion();
  std::vector<std::vector<int>> Ct(S.size(), std::vector<int>(S.size()));
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j) Ct[i][j] = C[j][i];
  bool symmetric = true;
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j)
      symmetric = symmetric && S[i][j] == S[j][i];
  const bool intertwines = modp_mul(p, S, C) == modp_mul(p, Ct, S);
  env.add("intertwiner", symmetric && intertwines,
          {{"matrix", S}, {"symmetric", symmetric},
           {"intertwines_companion", intertwines}});
  return finish(env);
}

// ------------------------------------------------------------ construct

int refuse_construction(const std::string& command, nlohmann::json inputs,
                        unsigned long long work, const std::string& reason) {
  ReportEnvelope env;
  env.command = command;
  env.inputs = std::move(inputs);
  env.add("construction-budget", false,
          {{"refused", true},
           {"work_units", work},
           {"work_cap", kConstructWorkCap},
           {"reason", reason}});
  return finish(env);
}

int run_construct_paley(long q, const std::string& modulus_csv,
                        const std::string& out) {
  const auto pp = prime_power(q);
  if (!pp || q <= 3 || q % 4 != 3)
    throw std::invalid_argument(
        "paley needs a prime power q = 3 (mod 4) with q > 3");
  const auto [p, s] = *pp;
  const unsigned long long work = static_cast<unsigned long long>((q - 1) / 2) *
                                  static_cast<unsigned long long>(q) *
                                  totient_prime_power(p, s);
  if (work > kConstructWorkCap)
    return refuse_construction(
        "construct paley", {{"q", q}}, work,
        "exact frame construction beyond desk scale; no partial output");
  FieldSpec f = modulus_csv.empty()
                    ? paley_field(q)
                    : FieldSpec::make_with_modulus(
                          p, s, parse_int_list(modulus_csv));
  write_payload(paley_etf(f).to_json(), out);
  return kExitPass;
}

int run_construct_diffset(const std::string& group, const std::string& set,
                          const std::string& out) {
  std::vector<unsigned> orders = parse_unsigned_list(group);
  std::vector<std::vector<unsigned>> subset =
      parse_element_list(set, orders.size());
  write_payload(etf_from_difference_set(orders, subset).to_json(), out);
  return kExitPass;
}

int run_construct_conference(long q, const std::string& out) {
  const auto pp = prime_power(q);
  if (!pp || q % 4 != 3)
    throw std::invalid_argument(
        "conference construction needs a prime power q = 3 (mod 4)");
  if (pp->second > 1) {
    ReportEnvelope env;
    env.command = "construct conference";
    env.inputs = {{"q", q}};
    env.add("scope", false,
            {{"refused", true},
             {"reason", "the skew-conference construction over proper prime "
                        "powers is out of scope; only prime q is built"}});
    return finish(env);
  }
  write_payload(conference_etf_gram(q).to_json(), out);
  return kExitPass;
}

// ------------------------------------------------------------- analyze

int run_analyze(const std::string& in, const std::string& checks_csv) {
  GramMatrix g = load_gram(in);
  ReportEnvelope env;
  env.command = "analyze";
  env.inputs = {{"in", in}, {"checks", checks_csv}};

  std::vector<std::string> checks;
  {
    std::stringstream ss(checks_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) checks.push_back(tok);
  }
  for (const std::string& c : checks) {
    if (c == "equiangular") {
      auto v = check_equiangular(g);
      nlohmann::json data{{"message", v.message}};
      if (v.ok) data["squared_inner_product"] = v.value.to_json();
      env.add("equiangular", v.ok, std::move(data));
    } else if (c == "tight") {
      auto v = check_tight(g);
      nlohmann::json data{{"rank", v.rank}, {"message", v.message}};
      if (v.ok && v.bound.is_rational())
        data["frame_bound"] = rat_str(v.bound.rational_value());
      env.add("tight", v.ok, std::move(data));
    } else if (c == "3c") {
      auto v = check_3c_uniform(g);
      nlohmann::json data{{"message", v.message}};
      if (v.ok) data["common_real_part"] = v.value.to_json();
      env.add("3c-uniform", v.ok, std::move(data));
    } else if (c == "etf") {
      env.add("etf", is_etf_gram(g));
    } else {
      throw std::invalid_argument("unknown check: " + c +
                                  " (choose equiangular,tight,3c,etf)");
    }
  }
  return finish(env);
}

// ------------------------------------------------------------ symmetry

PermGroup expected_group(const std::string& spec) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("expected-group syntax: agl:q, asp:p, "
                                "order:N, or full");
  const std::string head = spec.substr(0, colon);
  const long arg = std::stol(spec.substr(colon + 1));
  if (head == "agl") return agl_subgroup(paley_field(arg));
  if (head == "asp") return asp_group(arg);
  throw std::invalid_argument("unknown expected-group kind: " + head);
}

Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

int run_symmetry(const std::string& in, const std::string& mode,
                 const std::string& expect) {
  ReportEnvelope env;
  env.command = "symmetry";
  env.inputs = {{"in", in}, {"mode", mode}};
  if (!expect.empty()) env.inputs["expect"] = expect;

  PermGroup grp;
  if (mode == "vectors") {
    grp = vector_symmetry_group(pair_labels(load_gram(in)));
  } else if (mode == "lines") {
    grp = line_symmetry_group(load_triples(in));
  } else {
    throw std::invalid_argument("--mode must be 'lines' or 'vectors'");
  }
  env.add("group", true, grp.to_json());

  for (unsigned k = 1; k <= 4 && k <= grp.n; ++k) {
    nlohmann::json data{{"k", k}};
    bool ok = true;
    try {
      data["transitive"] = is_k_transitive(grp, k);
      data["homogeneous"] = is_k_homogeneous(grp, k);
    } catch (const std::runtime_error&) {
      data["skipped"] = true;  // action too large to walk at this k
    }
    env.add("action-k" + std::to_string(k), ok, std::move(data));
  }

  if (!expect.empty()) {
    if (expect.rfind("order:", 0) == 0) {
      const Int want(expect.substr(6));
      env.add("expected-order", grp.order == want,
              {{"expected", int_str(want)}, {"computed", int_str(grp.order)}});
    } else if (expect == "full") {
      const bool full = grp.full_symmetric || grp.order == factorial(grp.n);
      env.add("expected-group", full,
              {{"expected", expect}, {"computed_order", int_str(grp.order)}});
    } else {
      PermGroup want = expected_group(expect);
      const bool same = groups_equal(grp, want);
      env.add("expected-group", same,
              {{"expected", expect},
               {"expected_order", int_str(want.order)},
               {"computed_order", int_str(grp.order)}});
    }
  }
  return finish(env);
}

int run_homogeneity(const std::string& in, unsigned k, const std::string& mode,
                    int expect_hom) {
  ReportEnvelope env;
  env.command = "homogeneity";
  env.inputs = {{"in", in}, {"k", k}, {"mode", mode}};

  PermGroup grp = mode == "vectors"
                      ? vector_symmetry_group(pair_labels(load_gram(in)))
                      : line_symmetry_group(load_triples(in));
  const bool hom = is_k_homogeneous(grp, k);
  const bool trans = is_k_transitive(grp, k);
  bool ok = true;
  nlohmann::json data{{"k", k},
                      {"homogeneous", hom},
                      {"transitive", trans},
                      {"order", int_str(grp.order)}};
  if (expect_hom >= 0) {
    ok = hom == (expect_hom == 1);
    data["expected_homogeneous"] = expect_hom == 1;
    env.inputs["expect-homogeneous"] = expect_hom == 1;
  }
  env.add("homogeneity", ok, std::move(data));
  return finish(env);
}

// -------------------------------------------------------------- matroid

int run_spark(const std::string& in, unsigned max_size, unsigned jobs,
              unsigned long long budget) {
  (void)jobs;  // spark passes are short; scanning is sequential
  GramMatrix g = load_gram(in);
  ReportEnvelope env;
  env.command = "spark";
  env.inputs = {{"in", in}, {"budget", budget}};
  if (max_size > 0) env.inputs["max_size"] = max_size;

  EnumStats st;
  try {
    const unsigned sp = spark(g, budget, &st, max_size);
    env.timing = {{"subset_checks", st.subsets_checked}};
    if (sp == 0) {
      env.add("spark-scan", true,
              {{"determined", false},
               {"max_size", max_size},
               {"note", "no dependent subset within the size cap"}});
      return finish(env);
    }
    nlohmann::json data{{"spark", sp}, {"determined", true}};
    if (g.n <= 64) {
      const unsigned rank =
          static_cast<unsigned>(exact_rank(to_exact_matrix(g.entries)));
      data["rank"] = rank;
      if (g.n > rank) {
        data["lower_bound_attained"] =
            spark_lower_bound_attained(rank, g.n, sp);
        data["analytic_lower_bound"] = spark_analytic_lower_bound(rank, g.n);
      }
    }
    env.add("spark-scan", true, std::move(data));
    return finish(env);
  } catch (const BudgetExceeded& e) {
    env.timing = {{"subset_checks", st.subsets_checked}};
    env.add("spark-scan", false, refusal_data(e));
    return finish(env);
  }
}

int run_bender(const std::string& in, bool design_check, unsigned jobs,
               unsigned long long budget, const std::string& out) {
  GramMatrix g = load_gram(in);
  ReportEnvelope env;
  env.command = "bender";
  env.inputs = {{"in", in}, {"budget", budget}, {"design-check", design_check}};

  EnumStats st;
  try {
    BlockDesign bd = bender(g, budget, jobs, &st);
    env.timing = {{"subset_checks", st.subsets_checked}};
    env.add("bender", true,
            {{"v", bd.v},
             {"k", bd.k},
             {"complete", bd.complete},
             {"block_count", int_str(bd.block_count)}});
    if (!out.empty()) write_payload(bd.to_json(), out);

    if (design_check) {
      PermGroup line = line_symmetry_group(triple_labels(g));
      const unsigned degree = bender_design_degree(bd, line);
      nlohmann::json data{{"degree", degree}};
      if (bd.k >= 2 && bd.v >= 2) {
        auto l2 = is_t_design(bd, 2);
        data["lambda_t2"] =
            l2 ? nlohmann::json(int_str(*l2)) : nlohmann::json();
      }
      env.add("design-degree", true, std::move(data));
      env.add("short-circuit-spot-check", verify_short_circuits(g, bd));
    }
    return finish(env);
  } catch (const BudgetExceeded& e) {
    env.timing = {{"subset_checks", st.subsets_checked}};
    env.add("bender-scan", false, refusal_data(e));
    return finish(env);
  }
}

int run_design(const std::string& in, unsigned t, const std::string& lambda) {
  BlockDesign d = BlockDesign::from_json(load_json_file(in));
  ReportEnvelope env;
  env.command = "design";
  env.inputs = {{"in", in}, {"t", t}};
  auto l = is_t_design(d, t);
  bool ok = true;
  nlohmann::json data{{"t", t},
                      {"v", d.v},
                      {"k", d.k},
                      {"block_count", int_str(d.block_count)},
                      {"is_design", l.has_value()}};
  if (l) data["lambda"] = int_str(*l);
  if (!lambda.empty()) {
    env.inputs["expect-lambda"] = lambda;
    ok = l.has_value() && int_str(*l) == lambda;
    data["expected_lambda"] = lambda;
  }
  env.add("t-design", ok, std::move(data));
  return finish(env);
}

// --------------------------------------------------------- switch-equiv

int run_switch_equiv(const std::string& in1, const std::string& in2,
                     bool permutation_search, int expect_aligned) {
  GramMatrix g1 = load_gram(in1);
  GramMatrix g2 = load_gram(in2);
  ReportEnvelope env;
  env.command = "switch-equiv";
  env.inputs = {{"in1", in1}, {"in2", in2}};

  const bool aligned = switching_equivalent_aligned(g1, g2);
  bool ok = true;
  nlohmann::json data{{"equivalent", aligned}};
  if (expect_aligned >= 0) {
    ok = aligned == (expect_aligned == 1);
    data["expected"] = expect_aligned == 1;
    env.inputs["expect-aligned"] = expect_aligned == 1;
  }
  env.add("aligned-equivalence", ok, std::move(data));

  if (permutation_search) {
    auto iso = find_tp_isomorphism(triple_labels(g1), triple_labels(g2));
    nlohmann::json pdata{{"found", iso.has_value()}};
    if (iso) pdata["witness"] = iso->images;
    env.add("permutation-search", true, std::move(pdata));
  }
  return finish(env);
}

// ---------------------------------------------------------- paper-suite

void paley_suite_item(ReportEnvelope& env, long q, unsigned long long budget,
                      unsigned jobs, unsigned long long& total_checks) {
  const std::string tag = "q=" + std::to_string(q) + ":";
  const auto pp = prime_power(q);
  if (!pp || q <= 3) {
    env.add(tag + "admissibility", true,
            {{"admissible", false}, {"reason", "not a prime power > 3"}});
    return;
  }
  if (q % 4 != 3) {
    env.add(tag + "admissibility", true,
            {{"admissible", false}, {"reason", "q % 4 != 3"}});
    return;
  }
  const auto [p, s] = *pp;
  const unsigned d = static_cast<unsigned>((q - 1) / 2);

  // Scale gate before any construction: the frame build and the smallest
  // unaffordable scan size are both reported.
  const unsigned long long work =
      static_cast<unsigned long long>(d) * static_cast<unsigned long long>(q) *
      totient_prime_power(p, s);
  if (work > kConstructWorkCap) {
    Int cum = 0;
    unsigned s0 = 2;
    Int need = binomial(q, 2);
    while (cum + need <= Int(budget)) {
      cum += need;
      ++s0;
      need = binomial(q, s0);
    }
    env.add(tag + "desk-budget", false,
            {{"refused", true},
             {"construction_work_units", work},
             {"construction_cap", kConstructWorkCap},
             {"spark_scan_refused_at_size", s0},
             {"needed_subset_checks", int_str(need)},
             {"enumeration_budget", budget},
             {"analytic_spark_lower_bound",
              spark_analytic_lower_bound(d, static_cast<unsigned>(q))}});
    return;
  }

  FieldSpec f = paley_field(q);
  FrameMatrix fr = paley_etf(f);
  GramMatrix g = gram(fr);

  auto eq = check_equiangular(g);
  env.add(tag + "equiangular", eq.ok,
          eq.ok ? nlohmann::json{{"squared_inner_product", eq.value.to_json()}}
                : nlohmann::json{{"message", eq.message}});

  auto ti = check_tight(g);
  const bool bound_ok =
      ti.ok && ti.bound.is_rational() && ti.bound.rational_value() == Rat(q);
  env.add(tag + "tight-with-bound-q", bound_ok,
          {{"rank", ti.rank},
           {"frame_bound",
            ti.ok && ti.bound.is_rational()
                ? nlohmann::json(rat_str(ti.bound.rational_value()))
                : nlohmann::json()}});

  // quadratic residues as a difference set in the additive group
  std::vector<unsigned> orders(static_cast<size_t>(s),
                               static_cast<unsigned>(p));
  std::vector<std::vector<unsigned>> subset;
  for (long code : f.qr_codes()) {
    const FfElt e = f.decode(code);
    subset.push_back(std::vector<unsigned>(e.coords.begin(), e.coords.end()));
  }
  auto dv = is_difference_set(orders, subset);
  const bool ds_ok = dv.ok && dv.v == static_cast<unsigned>(q) && dv.k == d &&
                     dv.lambda == static_cast<unsigned>((q - 3) / 4);
  env.add(tag + "residues-difference-set", ds_ok,
          {{"v", dv.v}, {"k", dv.k}, {"lambda", dv.lambda}});

  PermGroup vec = vector_symmetry_group(pair_labels(g));
  PermGroup line = line_symmetry_group(triple_labels(g));
  PermGroup agl = agl_subgroup(f);
  const Int want_order = Int(q) * Int((q - 1) / 2) * Int(s);
  const bool group_ok = vec.order == want_order &&
                        groups_equal(vec, line) && groups_equal(vec, agl);
  env.add(tag + "symmetry-group", group_ok,
          {{"order", int_str(vec.order)},
           {"expected_order", int_str(want_order)},
           {"vectors_equal_lines", groups_equal(vec, line)},
           {"equals_affine_residue_group", groups_equal(vec, agl)}});

  const bool hom2 = is_k_homogeneous(vec, 2);
  const bool trans2 = is_k_transitive(vec, 2);
  env.add(tag + "2-homogeneous-not-2-transitive", hom2 && !trans2,
          {{"2_homogeneous", hom2}, {"2_transitive", trans2}});

  if (q == 7 || q == 11 || q == 27) {
    try {
      EnumStats st;
      BlockDesign bd = bender(g, budget, jobs, &st);
      total_checks += st.subsets_checked;
      bool spark_ok = false;
      bool bender_ok = false;
      nlohmann::json bdata{{"complete", bd.complete},
                           {"block_count", int_str(bd.block_count)}};
      if (q == 7) {
        spark_ok = bd.k == 4;
        bender_ok = bd.complete && bd.block_count == 35;
      } else if (q == 11) {
        spark_ok = bd.k == 6;
        bender_ok = bd.complete && bd.block_count == 462;
      } else {
        spark_ok = bd.k == 8;
        auto l2 = is_t_design(bd, 2);
        bender_ok = !bd.complete && bd.block_count == 351 && l2 && *l2 == 28;
        bdata["lambda_t2"] = l2 ? nlohmann::json(int_str(*l2))
                                : nlohmann::json();
      }
      env.add(tag + "spark", spark_ok, {{"spark", bd.k}});
      env.add(tag + "bender", bender_ok, std::move(bdata));
    } catch (const BudgetExceeded& e) {
      env.add(tag + "matroid", false, refusal_data(e));
    }
  }
}

int run_paper_suite(const std::string& q_csv, unsigned long long budget,
                    unsigned jobs) {
  ReportEnvelope env;
  env.command = "paper-suite";
  env.inputs = {{"q", q_csv}, {"budget", budget}, {"jobs", jobs}};
  unsigned long long total_checks = 0;
  for (long q : parse_long_list(q_csv))
    paley_suite_item(env, q, budget, jobs, total_checks);
  env.timing = {{"subset_checks", total_checks}};
  return finish(env);
}

// ----------------------------------------------------------- khom-suite

int run_khom_suite() {
  ReportEnvelope env;
  env.command = "khom-suite";

  for (long q : {3L, 7L}) {
    const std::string tag = "conference-q" + std::to_string(q) + ":";
    GramMatrix g = conference_etf_gram(q);
    const unsigned n = g.n;

    auto u = check_3c_uniform(g);
    env.add(tag + "3c-uniform", u.ok,
            u.ok ? nlohmann::json{{"common_real_part", u.value.to_json()}}
                 : nlohmann::json{{"message", u.message}});

    bool imag = true;
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = a + 1; b < n; ++b)
        for (unsigned c = b + 1; c < n; ++c)
          imag = imag && triple_product(g, a, b, c).is_purely_imaginary();
    env.add(tag + "triple-products-purely-imaginary", imag);

    PermGroup line = line_symmetry_group(triple_labels(g));
    const bool h3 = is_k_homogeneous(line, 3);
    nlohmann::json data{{"order", int_str(line.order)}};
    if (h3) data["3_subset_orbit_size"] = int_str(binomial(n, 3));
    env.add(tag + "line-3-homogeneous", h3, std::move(data));
  }

  {
    GramMatrix g7 = gram(paley_etf(paley_field(7)));
    PermGroup line = line_symmetry_group(triple_labels(g7));
    env.add("paley-7:not-3-homogeneous", !is_k_homogeneous(line, 3),
            {{"order", int_str(line.order)}});
  }

  {
    PermGroup sl = line_symmetry_group(triple_labels(simplex_gram(5)));
    bool all_hom = sl.order == 120;
    for (unsigned k = 1; k <= 5; ++k)
      all_hom = all_hom && is_k_homogeneous(sl, k);
    env.add("simplex-5:homogeneous-for-all-k", all_hom,
            {{"order", int_str(sl.order)}});
  }

  {
    PermGroup ob = vector_symmetry_group(pair_labels(onb_gram(4)));
    env.add("onb-4:vector-group-full-symmetric",
            ob.full_symmetric && ob.order == 24,
            {{"order", int_str(ob.order)}});
  }

  {
    PermGroup gl = line_symmetry_group(triple_labels(gabor_steiner_tp_table(3)));
    PermGroup asp = asp_group(3);
    const bool ok =
        gl.order == 216 && is_k_transitive(gl, 2) && is_subgroup(asp, gl);
    env.add("gabor-3:2-transitive-order-216", ok,
            {{"order", int_str(gl.order)},
             {"contains_symplectic_affine_group", is_subgroup(asp, gl)}});
  }

  return finish(env);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact equiangular tight frame toolkit"};
  app.require_subcommand(1);
  int code = kExitPass;

  unsigned long long budget = 0;  // resolved after parse (flag > env > default)

  // ---- field
  auto* c_field = app.add_subcommand("field", "finite field data and the "
                                              "symmetric intertwiner");
  long f_p = 0;
  int f_s = 1;
  std::string f_mod;
  c_field->add_option("--p", f_p, "characteristic (prime)")->required();
  c_field->add_option("--s", f_s, "extension degree");
  c_field->add_option("--modulus", f_mod,
                      "comma-separated modulus coefficients, constant first");
  c_field->callback([&] { code = run_field(f_p, f_s, f_mod); });

  // ---- construct (with a top-level `paley` alias)
  auto* c_con = app.add_subcommand("construct", "build frames and grams");
  c_con->require_subcommand(1);
  long p_q = 0;
  std::string p_mod, p_out;
  auto add_paley_opts = [&](CLI::App* cmd) {
    cmd->add_option("--q", p_q, "prime power, q = 3 (mod 4), q > 3")
        ->required();
    cmd->add_option("--modulus", p_mod, "field modulus override");
    cmd->add_option("--out", p_out, "write the frame JSON here");
    cmd->callback([&] { code = run_construct_paley(p_q, p_mod, p_out); });
  };
  add_paley_opts(c_con->add_subcommand("paley", "quadratic-residue frame"));
  add_paley_opts(app.add_subcommand("paley", "alias of construct paley"));

  auto* c_diff = c_con->add_subcommand("diffset", "frame from a difference set");
  std::string d_group, d_set, d_out;
  c_diff->add_option("--group", d_group, "cyclic factor orders, e.g. 7 or 3,3,3")
      ->required();
  c_diff->add_option("--set", d_set,
                     "elements: coordinates ','-joined, elements ';'-joined")
      ->required();
  c_diff->add_option("--out", d_out, "write the frame JSON here");
  c_diff->callback([&] { code = run_construct_diffset(d_group, d_set, d_out); });

  auto* c_conf = c_con->add_subcommand("conference", "skew-conference gram");
  long cf_q = 0;
  std::string cf_out;
  c_conf->add_option("--q", cf_q, "prime, q = 3 (mod 4)")->required();
  c_conf->add_option("--out", cf_out, "write the gram JSON here");
  c_conf->callback([&] { code = run_construct_conference(cf_q, cf_out); });

  auto* c_sim = c_con->add_subcommand("simplex", "regular simplex gram");
  auto* c_onb = c_con->add_subcommand("onb", "orthonormal basis gram");
  unsigned sim_n = 0, onb_n = 0;
  std::string sim_out, onb_out;
  c_sim->add_option("--n", sim_n, "number of vectors")->required();
  c_sim->add_option("--out", sim_out, "write the gram JSON here");
  c_sim->callback([&] {
    write_payload(simplex_gram(sim_n).to_json(), sim_out);
    code = kExitPass;
  });
  c_onb->add_option("--n", onb_n, "number of vectors")->required();
  c_onb->add_option("--out", onb_out, "write the gram JSON here");
  c_onb->callback([&] {
    write_payload(onb_gram(onb_n).to_json(), onb_out);
    code = kExitPass;
  });

  auto* c_gab = c_con->add_subcommand("gabor-steiner-tp",
                                      "triple-product table of the "
                                      "symplectic Gabor frame");
  long g_p = 0;
  std::string g_out;
  c_gab->add_option("--p", g_p, "odd prime")->required();
  c_gab->add_option("--out", g_out, "write the table JSON here");
  c_gab->callback([&] {
    write_payload(gabor_steiner_tp_table(g_p).to_json(), g_out);
    code = kExitPass;
  });

  // ---- analyze
  auto* c_an = app.add_subcommand("analyze", "gram verdicts");
  std::string an_in, an_checks = "equiangular,tight";
  c_an->add_option("--in", an_in, "frame or gram JSON")->required();
  c_an->add_option("--checks", an_checks, "equiangular,tight,3c,etf");
  c_an->callback([&] { code = run_analyze(an_in, an_checks); });

  // ---- symmetry
  auto* c_sym = app.add_subcommand("symmetry", "automorphism group search");
  std::string sy_in, sy_mode = "lines", sy_expect;
  c_sym->add_option("--in", sy_in, "frame, gram, or triple-table JSON")
      ->required();
  c_sym->add_option("--mode", sy_mode, "lines or vectors");
  c_sym->add_option("--expect", sy_expect, "agl:q, asp:p, order:N, or full");
  c_sym->callback([&] { code = run_symmetry(sy_in, sy_mode, sy_expect); });

  // ---- homogeneity
  auto* c_hom = app.add_subcommand("homogeneity", "k-homogeneity of the "
                                                  "symmetry group");
  std::string h_in, h_mode = "lines";
  unsigned h_k = 2;
  int h_expect = -1;
  c_hom->add_option("--in", h_in, "frame, gram, or triple-table JSON")
      ->required();
  c_hom->add_option("--k", h_k, "subset size")->required();
  c_hom->add_option("--mode", h_mode, "lines or vectors");
  c_hom->add_flag("--expect-homogeneous{1},--expect-not-homogeneous{0}",
                  h_expect, "assert the verdict");
  c_hom->callback([&] { code = run_homogeneity(h_in, h_k, h_mode, h_expect); });

  // ---- spark / bender / design
  auto* c_sp = app.add_subcommand("spark", "smallest dependent subset size");
  std::string sp_in;
  unsigned sp_max = 0, sp_jobs = 1;
  unsigned long long sp_budget = 0;
  c_sp->add_option("--in", sp_in, "frame or gram JSON")->required();
  c_sp->add_option("--max-size", sp_max, "scan subset sizes up to this cap");
  c_sp->add_option("--jobs", sp_jobs, "worker threads");
  c_sp->add_option("--budget", sp_budget, "subset-check budget");
  c_sp->callback([&] {
    code = run_spark(sp_in, sp_max, sp_jobs,
                     sp_budget ? sp_budget : default_budget());
  });

  auto* c_be = app.add_subcommand("bender", "all minimum-size dependent "
                                            "subsets");
  std::string be_in, be_out;
  bool be_check = false;
  unsigned be_jobs = 1;
  unsigned long long be_budget = 0;
  c_be->add_option("--in", be_in, "frame or gram JSON")->required();
  c_be->add_flag("--design-check", be_check,
                 "verify design degree and spot-check circuits");
  c_be->add_option("--jobs", be_jobs, "worker threads");
  c_be->add_option("--budget", be_budget, "subset-check budget");
  c_be->add_option("--out", be_out, "write the block design JSON here");
  c_be->callback([&] {
    code = run_bender(be_in, be_check, be_jobs,
                      be_budget ? be_budget : default_budget(), be_out);
  });

  auto* c_de = app.add_subcommand("design", "t-design test of a block design");
  std::string de_in, de_lambda;
  unsigned de_t = 2;
  c_de->add_option("--in", de_in, "block design JSON")->required();
  c_de->add_option("--t", de_t, "design strength to test")->required();
  c_de->add_option("--expect-lambda", de_lambda, "assert the multiplicity");
  c_de->callback([&] { code = run_design(de_in, de_t, de_lambda); });

  // ---- switch-equiv
  auto* c_sw = app.add_subcommand("switch-equiv", "switching equivalence of "
                                                  "two grams");
  std::string sw1, sw2;
  bool sw_perm = false;
  int sw_expect = -1;
  c_sw->add_option("--in1", sw1, "first frame or gram JSON")->required();
  c_sw->add_option("--in2", sw2, "second frame or gram JSON")->required();
  c_sw->add_flag("--permutation-search", sw_perm,
                 "also search for a triple-product isomorphism");
  c_sw->add_flag("--expect-aligned{1},--expect-not-aligned{0}", sw_expect,
                 "assert the aligned verdict");
  c_sw->callback(
      [&] { code = run_switch_equiv(sw1, sw2, sw_perm, sw_expect); });

  // ---- suites
  auto* c_ps = app.add_subcommand("paper-suite", "headline verification "
                                                 "campaign");
  std::string ps_q = "7,11,19,23,27";
  unsigned ps_jobs = 1;
  unsigned long long ps_budget = 0;
  c_ps->add_option("--q", ps_q, "comma-separated q list");
  c_ps->add_option("--jobs", ps_jobs, "worker threads");
  c_ps->add_option("--budget", ps_budget, "subset-check budget");
  c_ps->callback([&] {
    code = run_paper_suite(ps_q, ps_budget ? ps_budget : default_budget(),
                           ps_jobs);
  });

  auto* c_kh = app.add_subcommand("khom-suite", "k-homogeneity instance "
                                                "checks");
  c_kh->callback([&] { code = run_khom_suite(); });

  (void)budget;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    ReportEnvelope env;
    env.command = "(refused)";
    env.add("budget", false, refusal_data(e));
    std::cout << env.to_json().dump(2) << "\n";
    return kExitRefused;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal verification failure: " << e.what() << "\n";
    return kExitAssertFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}
