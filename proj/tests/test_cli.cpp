// End-to-end tests of the etf-forge binary: every command is spawned as a
// subprocess (path from ETF_FORGE_BIN) and judged on exit code, printed
// JSON, and byte determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

using nlohmann::json;

std::string bin_path() {
  const char* p = std::getenv("ETF_FORGE_BIN");
  REQUIRE_MESSAGE(p != nullptr, "ETF_FORGE_BIN must point at the binary");
  return p;
}

std::string work_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/etf_cli_XXXXXX";
    const char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string out_file = work_dir() + "/stdout.tmp";
  const std::string err_file = work_dir() + "/stderr.tmp";
  const std::string cmd = env + (env.empty() ? "" : " ") + bin_path() + " " +
                          args + " > " + out_file + " 2> " + err_file;
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

json parse(const std::string& text) {
  return json::parse(text);
}

json load(const std::string& path) {
  return json::parse(slurp(path));
}

bool file_exists(const std::string& path) {
  return std::ifstream(path).good();
}

// Shared fixtures, constructed on first use so cases stay order-independent.
std::string phi7_file() {
  const std::string f = work_dir() + "/phi7.json";
  if (!file_exists(f))
    REQUIRE(run("construct paley --q 7 --out " + f).exit_code == 0);
  return f;
}

std::string conf7_file() {
  const std::string f = work_dir() + "/conf7.json";
  if (!file_exists(f))
    REQUIRE(run("construct conference --q 7 --out " + f).exit_code == 0);
  return f;
}

json result_named(const json& envelope, const std::string& check) {
  for (const auto& r : envelope.at("results"))
    if (r.at("check") == check) return r;
  FAIL("no result named ", check);
  return {};
}

// Structural validation against the shipped schema: required envelope keys
// with the right shapes, and check+ok on every result entry.
void check_schema_conformance(const json& envelope) {
  const char* sp = std::getenv("ETF_FORGE_SCHEMA");
  REQUIRE_MESSAGE(sp != nullptr, "ETF_FORGE_SCHEMA must point at the schema");
  const json schema = load(sp);

  for (const auto& req : schema.at("required"))
    CHECK_MESSAGE(envelope.contains(req.get<std::string>()),
                  "missing envelope field ", req.get<std::string>());
  CHECK(envelope.at("tool_version").is_string());
  CHECK(envelope.at("command").is_string());
  CHECK(envelope.at("inputs").is_object());
  CHECK(envelope.at("results").is_array());
  CHECK(envelope.at("timing").is_object());
  if (schema.value("additionalProperties", true) == json(false))
    for (const auto& [key, value] : envelope.items()) {
      (void)value;
      CHECK_MESSAGE(schema.at("properties").contains(key),
                    "unexpected envelope field ", key);
    }
  for (const auto& r : envelope.at("results")) {
    CHECK(r.is_object());
    CHECK(r.at("check").is_string());
    CHECK(r.at("ok").is_boolean());
  }
  for (const auto& [key, value] : envelope.at("timing").items()) {
    (void)key;
    CHECK(value.is_number_integer());
  }
}

}  // namespace

TEST_CASE("construct paley writes a frame and analyze verifies it") {
  const std::string f7 = work_dir() + "/phi7_fresh.json";
  auto c = run("construct paley --q 7 --out " + f7);
  CHECK(c.exit_code == 0);

  const json frame = load(f7);
  CHECK(frame.at("kind") == "frame");
  CHECK(frame.at("d") == 3);
  CHECK(frame.at("n") == 7);
  CHECK(frame.at("m") == 7);
  CHECK(frame.at("labels").size() == 7);

  auto a = run("analyze --in " + f7 + " --checks equiangular,tight,etf");
  CHECK(a.exit_code == 0);
  const json env = parse(a.out);
  check_schema_conformance(env);
  CHECK(result_named(env, "equiangular").at("ok") == true);
  const json tight = result_named(env, "tight");
  CHECK(tight.at("ok") == true);
  CHECK(tight.at("frame_bound") == "7");
  CHECK(tight.at("rank") == 3);
  CHECK(result_named(env, "etf").at("ok") == true);
}

TEST_CASE("a failed verdict exits 2 and a bad check name exits 1") {
  const std::string f7 = phi7_file();
  // quadratic-residue triple products have non-constant real part
  auto a = run("analyze --in " + f7 + " --checks 3c");
  CHECK(a.exit_code == 2);
  CHECK(parse(a.out).at("results")[0].at("ok") == false);

  auto bad = run("analyze --in " + f7 + " --checks bogus");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("unknown check") != std::string::npos);

  auto missing = run("analyze --in " + work_dir() + "/nope.json");
  CHECK(missing.exit_code == 1);
}

TEST_CASE("inadmissible and oversized paley parameters are rejected") {
  CHECK(run("construct paley --q 5").exit_code == 1);
  CHECK(run("construct paley --q 15").exit_code == 1);  // not a prime power

  auto big = run("construct paley --q 343");
  CHECK(big.exit_code == 3);
  const json env = parse(big.out);
  check_schema_conformance(env);
  const json r = result_named(env, "construction-budget");
  CHECK(r.at("refused") == true);
  CHECK(r.at("ok") == false);
  CHECK(r.at("work_units").get<long long>() > r.at("work_cap").get<long long>());
}

TEST_CASE("conference gating: prime builds, prime power refuses, else usage") {
  const std::string c7 = work_dir() + "/conf7_fresh.json";
  CHECK(run("construct conference --q 7 --out " + c7).exit_code == 0);
  const json g = load(c7);
  CHECK(g.at("kind") == "gram");
  CHECK(g.at("n") == 8);

  auto q27 = run("construct conference --q 27");
  CHECK(q27.exit_code == 3);
  CHECK(result_named(parse(q27.out), "scope").at("refused") == true);

  CHECK(run("construct conference --q 9").exit_code == 1);  // 9 % 4 == 1
  CHECK(run("construct conference --q 15").exit_code == 1);
}

TEST_CASE("spark reports the value, honors the size cap, refuses budgets") {
  const std::string f7 = phi7_file();

  auto s = run("spark --in " + f7);
  CHECK(s.exit_code == 0);
  json env = parse(s.out);
  check_schema_conformance(env);
  const json scan = result_named(env, "spark-scan");
  CHECK(scan.at("spark") == 4);
  CHECK(scan.at("determined") == true);
  CHECK(scan.at("rank") == 3);
  CHECK(scan.at("lower_bound_attained") == false);
  CHECK(scan.at("analytic_lower_bound") == 4);
  CHECK(env.at("timing").at("subset_checks") == 56);

  auto capped = run("spark --in " + f7 + " --max-size 3");
  CHECK(capped.exit_code == 0);
  const json cs = result_named(parse(capped.out), "spark-scan");
  CHECK(cs.at("determined") == false);

  auto refused = run("spark --in " + f7 + " --budget 10");
  CHECK(refused.exit_code == 3);
  const json rs = result_named(parse(refused.out), "spark-scan");
  CHECK(rs.at("refused") == true);
  CHECK(rs.at("size_refused") == 2);
  CHECK(rs.at("needed_subset_checks") == "21");
  CHECK(rs.at("enumeration_budget") == 10);
  CHECK(rs.at("certified_spark_lower_bound") == 2);
}

TEST_CASE("the enumeration budget can come from the environment") {
  const std::string f7 = phi7_file();
  auto refused = run("spark --in " + f7, "ETF_FORGE_BUDGET=10");
  CHECK(refused.exit_code == 3);
  CHECK(result_named(parse(refused.out), "spark-scan").at(
            "enumeration_budget") == 10);

  // an explicit flag wins over the environment
  auto flag = run("spark --in " + f7 + " --budget 100000",
                  "ETF_FORGE_BUDGET=10");
  CHECK(flag.exit_code == 0);

  auto bad = run("spark --in " + f7, "ETF_FORGE_BUDGET=abc");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("bender emits the design, checks it, and round-trips to disk") {
  const std::string f7 = phi7_file();
  const std::string b7 = work_dir() + "/bender7.json";

  auto b = run("bender --in " + f7 + " --design-check --out " + b7);
  CHECK(b.exit_code == 0);
  const json env = parse(b.out);
  check_schema_conformance(env);
  const json bd = result_named(env, "bender");
  CHECK(bd.at("v") == 7);
  CHECK(bd.at("k") == 4);
  CHECK(bd.at("complete") == true);
  CHECK(bd.at("block_count") == "35");
  CHECK(result_named(env, "design-degree").at("degree") == 4);
  CHECK(result_named(env, "design-degree").at("lambda_t2") == "10");
  CHECK(result_named(env, "short-circuit-spot-check").at("ok") == true);

  const json design = load(b7);
  CHECK(design.at("kind") == "block_design");

  auto d = run("design --in " + b7 + " --t 2 --expect-lambda 10");
  CHECK(d.exit_code == 0);
  auto wrong = run("design --in " + b7 + " --t 2 --expect-lambda 11");
  CHECK(wrong.exit_code == 2);

  auto refused = run("bender --in " + f7 + " --budget 10");
  CHECK(refused.exit_code == 3);
  CHECK(result_named(parse(refused.out), "bender-scan").at("refused") == true);
}

TEST_CASE("symmetry matches expected groups and reports the k-table") {
  const std::string f7 = phi7_file();

  auto s = run("symmetry --in " + f7 + " --mode lines --expect agl:7");
  CHECK(s.exit_code == 0);
  json env = parse(s.out);
  check_schema_conformance(env);
  CHECK(result_named(env, "group").at("order") == "21");
  CHECK(result_named(env, "expected-group").at("ok") == true);
  CHECK(result_named(env, "action-k2").at("homogeneous") == true);
  CHECK(result_named(env, "action-k2").at("transitive") == false);

  auto v = run("symmetry --in " + f7 + " --mode vectors --expect order:21");
  CHECK(v.exit_code == 0);

  auto wrong = run("symmetry --in " + f7 + " --mode lines --expect order:22");
  CHECK(wrong.exit_code == 2);

  // a stored triple-product table is a valid lines-mode input
  const std::string g3 = work_dir() + "/gabor3.json";
  CHECK(run("construct gabor-steiner-tp --p 3 --out " + g3).exit_code == 0);
  auto gs = run("symmetry --in " + g3 + " --mode lines --expect order:216");
  CHECK(gs.exit_code == 0);
  auto gv = run("symmetry --in " + g3 + " --mode vectors");
  CHECK(gv.exit_code == 1);  // pair labels need a gram, not a triple table
}

TEST_CASE("homogeneity verdicts carry expectations") {
  const std::string c7 = conf7_file();
  auto h = run("homogeneity --in " + c7 + " --k 3 --expect-homogeneous");
  CHECK(h.exit_code == 0);
  const json r = result_named(parse(h.out), "homogeneity");
  CHECK(r.at("homogeneous") == true);
  CHECK(r.at("order") == "168");

  auto wrong = run("homogeneity --in " + c7 + " --k 3 --expect-not-homogeneous");
  CHECK(wrong.exit_code == 2);
}

TEST_CASE("switch-equiv answers for identical grams") {
  const std::string f7 = phi7_file();
  auto s = run("switch-equiv --in1 " + f7 + " --in2 " + f7 +
               " --permutation-search --expect-aligned");
  CHECK(s.exit_code == 0);
  const json env = parse(s.out);
  CHECK(result_named(env, "aligned-equivalence").at("equivalent") == true);
  CHECK(result_named(env, "permutation-search").at("found") == true);
}

TEST_CASE("difference-set and field commands run clean") {
  const std::string d7 = work_dir() + "/fano7.json";
  CHECK(run("construct diffset --group 7 --set 1,2,4 --out " + d7).exit_code ==
        0);
  CHECK(load(d7).at("kind") == "frame");
  CHECK(run("construct diffset --group 7 --set 1,2,3").exit_code == 1);

  auto f = run("field --p 3 --s 3");
  CHECK(f.exit_code == 0);
  const json env = parse(f.out);
  CHECK(result_named(env, "quadratic-residues").at("count") == 13);
  CHECK(result_named(env, "intertwiner").at("ok") == true);

  auto inadmissible = run("field --p 5 --s 1");
  CHECK(inadmissible.exit_code == 0);
  CHECK(result_named(parse(inadmissible.out), "paley-admissibility")
            .at("admissible") == false);
}

TEST_CASE("paper-suite passes on small q and refuses the conjecture scale") {
  auto ps = run("paper-suite --q 7,11");
  CHECK(ps.exit_code == 0);
  const json env = parse(ps.out);
  check_schema_conformance(env);
  CHECK(result_named(env, "q=7:spark").at("spark") == 4);
  CHECK(result_named(env, "q=7:bender").at("block_count") == "35");
  CHECK(result_named(env, "q=11:spark").at("spark") == 6);
  CHECK(result_named(env, "q=11:bender").at("block_count") == "462");
  CHECK(result_named(env, "q=11:symmetry-group").at("order") == "55");

  auto mixed = run("paper-suite --q 5,343");
  CHECK(mixed.exit_code == 3);
  const json menv = parse(mixed.out);
  CHECK(result_named(menv, "q=5:admissibility").at("admissible") == false);
  CHECK(result_named(menv, "q=5:admissibility").at("ok") == true);
  const json r343 = result_named(menv, "q=343:desk-budget");
  CHECK(r343.at("refused") == true);
  CHECK(r343.at("spark_scan_refused_at_size") == 4);
  CHECK(r343.at("needed_subset_checks") == "566685735");
  CHECK(r343.at("analytic_spark_lower_bound") == 20);
}

TEST_CASE("khom-suite verdicts all hold") {
  auto kh = run("khom-suite");
  CHECK(kh.exit_code == 0);
  const json env = parse(kh.out);
  check_schema_conformance(env);
  for (const auto& r : env.at("results"))
    CHECK_MESSAGE(r.at("ok") == true, r.at("check").get<std::string>());
  CHECK(result_named(env, "conference-q7:line-3-homogeneous")
            .at("3_subset_orbit_size") == "56");
  CHECK(result_named(env, "gabor-3:2-transitive-order-216").at("order") ==
        "216");
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const std::string f7 = phi7_file();

  auto a1 = run("paper-suite --q 7");
  auto a2 = run("paper-suite --q 7");
  CHECK(a1.exit_code == 0);
  CHECK(a1.out == a2.out);

  auto j1 = run("bender --in " + f7 + " --jobs 1");
  auto j4 = run("bender --in " + f7 + " --jobs 4");
  CHECK(j1.exit_code == 0);
  CHECK(j1.out == j4.out);

  const std::string alias = work_dir() + "/phi7_alias.json";
  CHECK(run("paley --q 7 --out " + alias).exit_code == 0);
  CHECK(slurp(alias) == slurp(f7));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("").exit_code == 1);
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("construct").exit_code == 1);
  CHECK(run("spark").exit_code == 1);           // --in is required
  CHECK(run("symmetry --in /tmp --mode sideways").exit_code == 1);
}
