#include "idemcalc/check.hpp"
#include "idemcalc/cli.hpp"

#include "support.hpp"

#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace idem;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = IDEMCALC_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "idemcalc");
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

/// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("idemcalc_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::vector<fs::path> bundled() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kFixtures))
    if (e.path().extension() == ".json" && e.path().filename() != "truncated.json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string where_of(const std::string& text) {
  try {
    parse_fixture(text);
  } catch (const FormatError& e) {
    return e.where;
  }
  return "";
}

const char* kMinimal = R"({"format": "idemcalc-fixture", "version": 1, "dim": 2,
  "elements": {"a": [["1", "0"], ["0", "0"]], "b": [["0", "0"], ["0", "1"]]},
  "families": {"F": {"members": ["a", "b"], "claims": ["orthogonal"]}}})";

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("every bundled fixture round-trips") {
  const auto files = bundled();
  CHECK(files.size() >= 15);
  for (const auto& p : files) {
    INFO(p.filename().string());
    const FixtureFile f = read_fixture(p);
    const std::string text = emit_fixture(f);
    CHECK(parse_fixture(text) == f);
    CHECK(emit_fixture(parse_fixture(text)) == text);
  }
}

TEST_CASE("generated fixtures are stored in canonical form") {
  for (const char* name : {"curve_d1.json", "special_ledger_d4.json", "lefschetz_surface.json", "triangular_seed42.json"})
    CHECK(emit_fixture(read_fixture(kFixtures / name)) == slurp(kFixtures / name));
}

TEST_CASE("the minimal fixture parses and passes") {
  const FixtureFile f = parse_fixture(kMinimal);
  CHECK(f.dim() == 2);
  CHECK(f.pairing == RatMatrix::identity(2));
  CHECK(check_fixture(f).ok());
}

TEST_CASE("diagnostics name the offending line or field") {
  CHECK(where_of("{\"format\": \"idemcalc-fixture\",\n  \"version\": 1,\n  \"dim\": ") == "line 3, column 10");
  CHECK(where_of(with(kMinimal, R"(["0", "1"]])", R"(["0", 1]])")) == "elements.b[1][1]");
  CHECK(where_of(with(kMinimal, R"(["0", "1"]])", R"(["0", "0.5"]])")) == "elements.b[1][1]");
  CHECK(where_of(with(kMinimal, R"(["0", "1"]])", R"(["0"]])")) == "elements.b[1]");
  CHECK(where_of(with(kMinimal, R"(["a", "b"])", R"(["a", "c"])")) == "families.F.members[1]");
  CHECK(where_of(with(kMinimal, "\"claims\"", "\"claimz\"")) == "families.F.claimz");
  CHECK(where_of(with(kMinimal, "\"orthogonal\"", "\"normal\"")) == "families.F.claims[0]");
  CHECK(where_of(with(kMinimal, "\"version\": 1", "\"version\": 2")) == "version");
  CHECK(where_of(with(kMinimal, "\"dim\": 2", "\"dim\": 3")) == "elements.a");
  CHECK(where_of(with(kMinimal, "\"dim\": 2", "\"pairing\": [[\"1\", \"1\"], [\"1\", \"1\"]]")) == "pairing");
  CHECK(where_of(with(kMinimal, "\"format\": \"idemcalc-fixture\", ", "")) == "$");
}

TEST_CASE("the dimension cap applies to fixtures") {
  ::setenv("IDEMCALC_MAX_DIM", "1", 1);
  CHECK(where_of(kMinimal) == "pairing");
  ::unsetenv("IDEMCALC_MAX_DIM");
  CHECK(where_of(kMinimal).empty());
}

TEST_CASE("expectations decide the outcome") {
  FixtureFile f = read_fixture(kFixtures / "curve_break_B.json");
  REQUIRE(f.expectations.size() == 1);
  CHECK(f.expectations[0].at == std::vector<long>{2, 0});
  CHECK(check_fixture(f).ok());

  f.expectations[0].at = std::vector<long>{1, 0};
  CHECK_FALSE(check_fixture(f).ok());
  f.expectations[0].at.reset();
  CHECK(check_fixture(f).ok());
  f.expectations.clear();
  CHECK_FALSE(check_fixture(f).ok());

  f = read_fixture(kFixtures / "curve_d1.json");
  f.expectations.push_back({"murre.Z", "X", true, std::nullopt});
  CHECK_FALSE(check_fixture(f).ok());
}

TEST_CASE("check: exit codes and reports") {
  CHECK(run({"check", (kFixtures / "curve_d1.json").string()}).status == kExitPass);
  const Run b = run({"check", (kFixtures / "curve_break_B.json").string()});
  CHECK(b.status == kExitPass);
  CHECK(b.out.find("FAIL  murre.B [X] at (2,0)") != std::string::npos);
  const Run t = run({"check", (kFixtures / "truncated.json").string()});
  CHECK(t.status == kExitMalformed);
  CHECK(t.err.find("line ") != std::string::npos);
  CHECK(run({"check", (kFixtures / "missing.json").string()}).status == kExitMalformed);
  CHECK(run({"check"}).status == kExitMalformed);
  CHECK(run({"frobnicate"}).status == kExitMalformed);
  CHECK(run({"check", "--report", "xml", (kFixtures / "curve_d1.json").string()}).status == kExitMalformed);
  CHECK(run({"--help"}).status == kExitPass);

  Scratch s;
  const std::string bad = s / "bad.json";
  std::ofstream(bad) << with(kMinimal, "[\"0\", \"0\"]], \"b\"", "[\"0\", \"1\"]], \"b\"");
  CHECK(run({"check", bad}).status == kExitFailure);
}

TEST_CASE("check: batch order and structured reports") {
  Scratch s;
  std::vector<std::string> paths;
  for (const auto& p : bundled()) {
    const std::string copy = s / p.filename().string();
    fs::copy_file(p, copy);
    paths.push_back(copy);
  }
  std::vector<std::string> args{"check", "--jobs", "1"};
  args.insert(args.end(), paths.begin(), paths.end());
  const Run serial = run(args);
  args[2] = "6";
  args.insert(args.begin() + 1, {"--report", "structured"});
  const Run parallel = run(args);
  CHECK(serial.status == kExitPass);
  CHECK(parallel.status == kExitPass);
  CHECK(serial.out == parallel.out);

  for (const auto& p : paths) {
    INFO(p);
    CHECK(slurp(p) == slurp(kFixtures / fs::path(p).filename()));
    const auto doc = nlohmann::json::parse(slurp(p + ".report.json"));
    CHECK(doc["format"] == "idemcalc-report");
    CHECK(doc["ok"] == true);
    CHECK(!doc["checks"].empty());
  }
}

TEST_CASE("orthonormalize: worked pair, re-run and hypothesis failure") {
  Scratch s;
  const Run r = run({"orthonormalize", (kFixtures / "worked_pair.json").string(), "--output", s / "out.json"});
  REQUIRE(r.status == kExitPass);
  const FixtureFile f = read_fixture(s / "out.json");
  REQUIRE(f.orthonormalization);
  CHECK(f.orthonormalization->passes_run == 1);
  const auto& out = f.families.at(f.orthonormalization->output).members;
  CHECK(f.elements.at(out[0]) == RatMatrix{{1, 0}, {testing::q(-1, 2), 0}});
  CHECK(f.elements.at(out[1]) == RatMatrix{{0, 0}, {testing::q(1, 2), 1}});
  CHECK(check_fixture(f).ok());

  CHECK(run({"orthonormalize", s / "out.json", "--output", s / "again.json"}).status == kExitPass);
  CHECK(slurp(s / "again.json") == slurp(s / "out.json"));

  const Run bad = run({"orthonormalize", (kFixtures / "hypothesis_violation.json").string(), "--output", s / "x.json"});
  CHECK(bad.status == kExitFailure);
  CHECK(bad.err.find("member 0 composed with member 1") != std::string::npos);
  CHECK_FALSE(fs::exists(s / "x.json"));
  CHECK(run({"orthonormalize", (kFixtures / "truncated.json").string(), "--output", s / "x.json"}).status ==
        kExitMalformed);
}

TEST_CASE("orthonormalize: orthogonal input and pass limits") {
  Scratch s;
  REQUIRE(run({"orthonormalize", (kFixtures / "orthogonal_family.json").string(), "--output", s / "o.json"}).status ==
          kExitPass);
  const FixtureFile o = read_fixture(s / "o.json");
  CHECK(o.orthonormalization->passes_run == 0);
  CHECK(o.orthonormalization->output == "E");

  REQUIRE(run({"orthonormalize", (kFixtures / "triangular_seed42.json").string(), "--passes", "1", "--output",
               s / "one.json"})
              .status == kExitPass);
  const FixtureFile one = read_fixture(s / "one.json");
  CHECK(one.orthonormalization->passes_run == 1);
  const FixtureReport rep = check_fixture(one);
  CHECK(rep.report.find("gs.pass.orthogonality")->passed);
  CHECK(rep.report.find("gs.witness")->passed);
  CHECK_FALSE(rep.report.find("gs.output.orthogonal")->passed);

  // Continuing from the partial result finishes the job.
  REQUIRE(run({"orthonormalize", s / "one.json", "--output", s / "two.json"}).status == kExitPass);
  const FixtureFile two = read_fixture(s / "two.json");
  CHECK(two.orthonormalization->input == one.orthonormalization->output);
  CHECK(check_fixture(two).report.find("gs.output.orthogonal")->passed);
}

TEST_CASE("tampered records are caught") {
  Scratch s;
  REQUIRE(run({"orthonormalize", (kFixtures / "triangular_seed42.json").string(), "--output", s / "o.json"}).status ==
          kExitPass);
  FixtureFile f = read_fixture(s / "o.json");
  REQUIRE(f.orthonormalization->passes_run >= 2);
  f.elements.at(f.orthonormalization->witnesses[1].u)(0, 0) += 1;
  const FixtureReport rep = check_fixture(f);
  CHECK(rep.report.find("gs.witness")->location == std::vector<long>{1});
  f.orthonormalization->tables[1][0][1] = !f.orthonormalization->tables[1][0][1];
  CHECK(check_fixture(f).report.find("gs.pass.orthogonality")->location == std::vector<long>{1});
}

TEST_CASE("product: curve x curve, point unit, malformed input") {
  Scratch s;
  const std::string curve = (kFixtures / "curve_d1.json").string();
  REQUIRE(run({"product", curve, curve, "--output", s / "cc.json"}).status == kExitPass);
  const FixtureFile cc = read_fixture(s / "cc.json");
  const KunnethLedger P = FixtureView(cc).ledger("product");
  CHECK(P.d() == 2);
  std::vector<std::size_t> dims;
  for (int i = 0; i <= 4; ++i) dims.push_back(P.homology().block(i).size());
  CHECK(dims == std::vector<std::size_t>{1, 4, 6, 4, 1});
  CHECK(cc.ledgers.at("product").self_dual);
  CHECK(check_fixture(cc).ok());
  CHECK(slurp(s / "cc.json") == slurp(kFixtures / "product_curve_curve.json"));

  REQUIRE(run({"product", (kFixtures / "point.json").string(), curve, "--output", s / "pc.json"}).status ==
          kExitPass);
  const FixtureFile pc = read_fixture(s / "pc.json"), c = read_fixture(curve);
  const KunnethLedger Lp = FixtureView(pc).ledger("product"), Lc = FixtureView(c).ledger("X");
  CHECK(pc.pairing == c.pairing);
  for (std::size_t i = 0; i < Lc.size(); ++i) CHECK(Lp[i] == Lc[i]);
  CHECK(Lp.homology() == Lc.homology());
  CHECK(pc.realizations.at("W").levels.size() == c.realizations.at("W").levels.size());

  CHECK(run({"product", curve, (kFixtures / "truncated.json").string(), "--output", s / "x.json"}).status ==
        kExitMalformed);
  CHECK(run({"product", curve, (kFixtures / "worked_pair.json").string(), "--output", s / "x.json"}).status ==
        kExitMalformed);
}

TEST_CASE("product refuses inputs that fail verification") {
  Scratch s;
  FixtureFile bad = read_fixture(kFixtures / "curve_d1.json");
  bad.elements.at(bad.ledgers.at("X").projectors[1])(1, 1) = 0;
  write_fixture(s / "bad.json", bad);
  const std::string curve = (kFixtures / "curve_d1.json").string();
  CHECK(run({"product", s / "bad.json", curve, "--output", s / "p.json"}).status == kExitFailure);
  CHECK_FALSE(fs::exists(s / "p.json"));
}

TEST_CASE("generate: determinism, self-verification and failures") {
  Scratch s;
  const std::vector<std::string> tri{"generate", "--kind", "triangular", "--seed", "42", "--blocks", "4"};
  const Run a = run(tri), b = run(tri);
  CHECK(a.status == kExitPass);
  CHECK(a.out == b.out);
  CHECK(a.out == slurp(kFixtures / "triangular_seed42.json"));
  CHECK(run({"generate", "--kind", "triangular", "--seed", "43", "--blocks", "4"}).out != a.out);

  REQUIRE(run({"generate", "--kind", "special-ledger", "--d", "4", "--seed", "42", "--output", s / "d4.json"})
              .status == kExitPass);
  CHECK(run({"check", s / "d4.json"}).status == kExitPass);

  for (const char* neg : {"break_B", "break_D"}) {
    REQUIRE(run({"generate", "--kind", "special-ledger", "--d", "3", "--negative", neg, "--output", s / "n.json"})
                .status == kExitPass);
    const Run r = run({"check", s / "n.json"});
    CHECK(r.status == kExitPass);
    CHECK(r.out.find("MATCH") != std::string::npos);
  }

  CHECK(run({"generate", "--kind", "self-dual", "--blocks", "2", "--nontrivial", "--max-retries", "3"}).status ==
        kExitFailure);
  CHECK(run({"generate", "--kind", "curve", "--negative", "break_B"}).status == kExitFailure);
  CHECK(run({"generate", "--kind", "bogus"}).status == kExitMalformed);
  CHECK(run({"generate", "--kind", "triangular", "--negative", "bogus"}).status == kExitMalformed);
  CHECK(run({"generate", "--kind", "triangular", "--seed", "minus-one"}).status == kExitMalformed);
  CHECK(run({"generate", "--seed", "1"}).status == kExitMalformed);
}

TEST_CASE("generate: block sizes") {
  const Run r = run({"generate", "--kind", "triangular", "--block-sizes", "1,1"});
  REQUIRE(r.status == kExitPass);
  const FixtureFile f = parse_fixture(r.out);
  CHECK(f.dim() == 2);
  CHECK(f.families.at("F").members.size() == 2);
}
