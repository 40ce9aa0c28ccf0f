#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "vqg/cli/cache.hpp"
#include "vqg/cli/commands.hpp"
#include "vqg/cli/definition.hpp"
#include "vqg/cli/toml.hpp"

using namespace vqg;
using namespace vqg::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixtures() {
  const char* f = std::getenv("VQG_FIXTURES");
  return f ? f : "tests/fixtures";
}
std::string fixture(const std::string& name) { return fixtures() + "/" + name; }

// Fresh cache directory per test case.
struct TempCache {
  fs::path dir;
  TempCache() {
    dir = fs::temp_directory_path() / ("vqg-test-cache-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::remove_all(dir);
    ::setenv("VQG_CACHE_DIR", dir.c_str(), 1);
  }
  ~TempCache() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

struct Run {
  int code;
  std::string out;
};

// Runs the installed binary through the shell; skipped when VQG_BIN is not set.
std::optional<Run> run_bin(const std::string& args) {
  const char* bin = std::getenv("VQG_BIN");
  if (!bin) return std::nullopt;
  fs::path out = fs::temp_directory_path() / ("vqg-test-out-" + std::to_string(::getpid()));
  std::string cmd = std::string("\"") + bin + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out);
  return Run{WEXITSTATUS(status), ss.str()};
}

}  // namespace

TEST_CASE("TOML subset") {
  json j = parse_toml(R"(# comment
kind = "lattice"   # trailing
n = -12
flag = true
s = 'literal \n'
arr = [[1, 2],
       [3, 4],]
inline = { a = 1, b = "x" }
[window]
degree = 4
[[ext]]
lambda = [1]
[[ext]]
lambda = [2]
[a.b]
c = "\"q\""
)");
  CHECK(j["kind"] == "lattice");
  CHECK(j["n"] == -12);
  CHECK(j["flag"] == true);
  CHECK(j["s"] == "literal \\n");
  CHECK(j["arr"] == json::parse("[[1,2],[3,4]]"));
  CHECK(j["inline"]["b"] == "x");
  CHECK(j["window"]["degree"] == 4);
  REQUIRE(j["ext"].size() == 2);
  CHECK(j["ext"][1]["lambda"] == json::parse("[2]"));
  CHECK(j["a"]["b"]["c"] == "\"q\"");

  CHECK_THROWS_AS(parse_toml("x = 1\nx = 2\n"), TomlError);
  CHECK_THROWS_AS(parse_toml("x = 1.5\n"), TomlError);
  CHECK_THROWS_AS(parse_toml("x = \"open\n"), TomlError);
  try {
    parse_toml("a = 1\nb = [1,\n2\n");
    FAIL("expected TomlError");
  } catch (const TomlError& e) {
    CHECK(std::string(e.what()).rfind("line ", 0) == 0);
  }
}

TEST_CASE("definition schema") {
  CHECK(parse_definition("kind = \"lattice\"\nkappa = [[2]]\n").lattice->kappa == std::vector<std::vector<int>>{{2}});
  CHECK_THROWS_AS(parse_definition("kappa = [[2]]\n"), DefinitionError);
  CHECK_THROWS_AS(parse_definition("kind = \"lattice\"\nkappa = [[2]]\ncolour = 1\n"), DefinitionError);
  CHECK_THROWS_AS(parse_definition("kind = \"lattice\"\nkappa = [[2]]\ntruncation = 0\n"), DefinitionError);
  CHECK_THROWS_AS(parse_definition("kind = \"lattice\"\nkappa = [[\"2\"]]\n"), DefinitionError);
  CHECK_THROWS_AS(parse_definition("kind = \"lattice\"\nkappa = [[2]]\n[window]\nrange = [3, 1]\n"), DefinitionError);
  CHECK_THROWS_AS(parse_definition("kind = \"joyce-lattice\"\nrank = 1\n[[ext]]\nlambda = [1]\nmu = [1]\neven = [1]\n"
                                   "[[ext]]\nlambda = [2]\nmu = [1]\neven = [1]\n"),
                  DefinitionError);
  Definition d = load_definition(fixture("z2_sign.toml"));
  CHECK(d.kind == Kind::FiniteBialgebra);
  CHECK(d.rmatrix.has_value());
  CHECK(d.digest.size() == 64);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK_THROWS_AS(load_definition(fixture("missing.toml")), DefinitionError);
}

TEST_CASE("check exit codes") {
  TempCache cache;
  CHECK(cmd_check(fixture("z2_sign.toml"), "rmatrix", {}).exit_code == 0);
  Outcome lit = cmd_check(fixture("z2_literal.toml"), "rmatrix", {});
  CHECK(lit.exit_code == 1);
  CHECK(lit.out.find("witness hexagon-1") != std::string::npos);
  CHECK(cmd_check(fixture("bad_kappa.toml"), "vqg", {}).exit_code == 2);
  CHECK(cmd_check(fixture("bad_syntax.toml"), "vqg", {}).exit_code == 2);
  CHECK(cmd_check(fixture("bad_kind.toml"), "vqg", {}).exit_code == 2);
  CHECK(cmd_check(fixture("lattice_even.toml"), "no-such-suite", {}).exit_code == 2);
  CHECK(cmd_check(fixture("z2_sign.toml"), "vqg", {}).exit_code == 2);
  RunOptions bad_format;
  bad_format.format = "yaml";
  CHECK(cmd_check(fixture("z2_sign.toml"), "rmatrix", bad_format).exit_code == 2);
}

TEST_CASE("nonsymmetric lattice verdicts") {
  TempCache cache;
  RunOptions json_opt;
  json_opt.format = "json";
  Outcome plain = cmd_check(fixture("lattice_nonsym.toml"), "vertex-commutative", json_opt);
  CHECK(plain.exit_code == 1);
  json j = json::parse(plain.out);
  CHECK(j["status"] == "fail");
  bool skew_witness = false;
  for (const auto& c : j["checks"])
    if (c["name"] == "skew-commutativity") {
      CHECK(c["status"] == "fail");
      REQUIRE(c.contains("witness"));
      for (const char* k : {"check", "tuple", "exponent", "lhs", "rhs"}) CHECK(c["witness"].contains(k));
      skew_witness = true;
    }
  CHECK(skew_witness);
  CHECK(cmd_check(fixture("lattice_nonsym.toml"), "vertex-braided", {}).exit_code == 0);
  CHECK(cmd_check(fixture("lattice_nonsym.toml"), "vqg", {}).exit_code == 0);
}

TEST_CASE("report") {
  TempCache cache;
  RunOptions opt;
  opt.format = "json";
  Outcome sym = cmd_report(fixture("lattice_even.toml"), opt);
  CHECK(sym.exit_code == 0);
  json j = json::parse(sym.out);
  CHECK(j["status"] == "pass");
  for (const char* k : {"digest", "kind", "name", "status", "suites", "tool_version", "truncation"}) CHECK(j.contains(k));
  CHECK(j["suites"].size() == 5);

  Outcome plain = cmd_report(fixture("z2_plain.toml"), opt);
  CHECK(plain.exit_code == 0);
  json p = json::parse(plain.out);
  CHECK(p["suites"]["rmatrix"]["status"] == "skipped");
  CHECK(p["suites"]["bialgebra"]["status"] == "pass");

  CHECK(cmd_report(fixture("bad_kappa.toml"), opt).exit_code == 2);
  CHECK(cmd_report(fixture("joyce.toml"), opt).exit_code == 0);
  CHECK(cmd_report(fixture("hlinear.toml"), opt).exit_code == 0);
  CHECK(cmd_report(fixture("holomorphic.toml"), opt).exit_code == 0);
}

TEST_CASE("reports are deterministic with a cold or warm cache") {
  TempCache cache;
  RunOptions opt;
  opt.format = "json";
  Outcome cold = cmd_report(fixture("lattice_nonsym.toml"), opt);
  REQUIRE(fs::exists(cache.dir));
  CHECK_FALSE(fs::is_empty(cache.dir));
  Outcome warm = cmd_report(fixture("lattice_nonsym.toml"), opt);
  CHECK(cold.out == warm.out);
  CHECK(cold.exit_code == warm.exit_code);
  // Deleting the cache never changes the verdicts.
  fs::remove_all(cache.dir);
  CHECK(cmd_report(fixture("lattice_nonsym.toml"), opt).out == cold.out);
  // Neither does a corrupted cache file.
  for (const auto& f : fs::directory_iterator(cache.dir)) std::ofstream(f.path()) << "{not json";
  CHECK(cmd_report(fixture("lattice_nonsym.toml"), opt).out == cold.out);
  RunOptions timed = opt;
  timed.timings = true;
  CHECK(json::parse(cmd_report(fixture("lattice_nonsym.toml"), timed).out)["suites"]["vqg"].contains("seconds"));
}

TEST_CASE("cache round trip") {
  TempCache cache;
  auto L = Lattice::make({{0, 1}, {0, 0}});
  fs::path file = cache.dir / "roundtrip.json";
  VertexEngine fresh = borcherds_twist_vertex(L);
  auto st = fresh.states(1);
  {
    OpeCache c(file);
    VertexEngine e = c.wrap(borcherds_twist_vertex(L));
    for (const auto& a : st)
      for (const auto& b : st) e.Y(a, b, 2);
    c.save();
    CHECK(c.size() == st.size() * st.size());
  }
  OpeCache again(file);
  again.load();
  CHECK(again.size() == st.size() * st.size());
  // A wrapped engine whose inner Y would be wrong still answers from the cache.
  VertexEngine broken = fresh;
  broken.Y = [](const BasisKey&, const BasisKey&, int) -> VSeries { throw std::logic_error("not cached"); };
  broken.Y_cached = nullptr;
  VertexEngine cached = again.wrap(broken);
  for (const auto& a : st)
    for (const auto& b : st) {
      CHECK(cached.Y(a, b, 2) == fresh.Y(a, b, 2));
      CHECK(cached.Y(a, b, 0) == fresh.Y(a, b, 0));
    }
  CHECK_THROWS_AS(cached.Y(st[0], st[0], 5), std::logic_error);

  // Ring-valued coefficients survive the trip.
  RingPtr ring = make_ring({"tau"});
  OpeCache rc(cache.dir / "ring.json");
  VertexEngine re = fresh;
  StateVector v(st[0], Scalar::param(ring, "tau", 2) + Scalar(Rational(1, 3)));
  re.Y = [v](const BasisKey&, const BasisKey&, int) { return VSeries{{0, v}}; };
  re.Y_cached = nullptr;
  rc.wrap(re).Y(st[0], st[0], 1);
  rc.save();
  OpeCache rc2(cache.dir / "ring.json");
  rc2.load();
  CHECK(rc2.wrap(broken).Y(st[0], st[0], 1).at(0) == v);
}

TEST_CASE("ope rendering") {
  TempCache cache;
  RunOptions w;
  w.window = std::make_pair(-3, 1);
  Outcome o = cmd_ope(fixture("heisenberg1.toml"), "a[1,-1]", "a[1,-1]", w);
  CHECK(o.exit_code == 0);
  CHECK(o.out == "1*z^-2*|0> + 1*z^0*a[1,-1]^2\n");
  RunOptions w2;
  w2.window = std::make_pair(-2, 2);
  CHECK(cmd_ope(fixture("lattice_even.toml"), "|0>", "e[1]", w2).out == "1*z^0*e[1]\n");
  Outcome pole = cmd_ope(fixture("lattice_even.toml"), "e[1]", "e[-1]", {});
  CHECK(pole.out.rfind("1*z^-2*|0>", 0) == 0);
  CHECK(cmd_ope(fixture("lattice_even.toml"), "e[1", "e[-1]", {}).exit_code == 2);
  CHECK(cmd_ope(fixture("z2_sign.toml"), "e0", "e0", {}).exit_code == 2);
}

TEST_CASE("dims") {
  CHECK(cmd_dims(fixture("heisenberg1.toml"), "0", 6).out == "0 1\n1 1\n2 2\n3 3\n4 5\n5 7\n6 11\n");
  Outcome two = cmd_dims(fixture("heisenberg2.toml"), "0,0", 2);
  CHECK(two.out == "0 1\n1 2\n2 5\n");
  CHECK(cmd_dims(fixture("lattice_even.toml"), "2", 1).exit_code == 2);
  CHECK(cmd_dims(fixture("heisenberg1.toml"), "0", 7).exit_code == 2);
  CHECK(cmd_dims(fixture("heisenberg2.toml"), "0", 1).exit_code == 2);
  CHECK(cmd_dims(fixture("hlinear.toml"), "1", 1).out == "0 2\n1 2\n");
}

TEST_CASE("window syntax") {
  CHECK(parse_window("-3:1") == std::make_pair(-3, 1));
  CHECK_THROWS_AS(parse_window("3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_window("2:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_window("a:b"), std::invalid_argument);
}

TEST_CASE("binary honours the exit-code contract on every fixture") {
  TempCache cache;
  struct Case {
    std::string args;
    int code;
  };
  std::vector<Case> cases{
      {"check " + fixture("z2_sign.toml") + " --suite rmatrix", 0},
      {"check " + fixture("z2_sign.toml") + " --suite twist", 0},
      {"check " + fixture("z2_literal.toml") + " --suite rmatrix", 1},
      {"report " + fixture("z2_plain.toml"), 0},
      {"report " + fixture("heisenberg1.toml") + " --truncation 1", 0},
      {"report " + fixture("heisenberg2.toml") + " --truncation 1", 0},
      {"report " + fixture("lattice_even.toml"), 0},
      {"check " + fixture("lattice_nonsym.toml") + " --suite vertex-commutative", 1},
      {"check " + fixture("lattice_nonsym.toml") + " --suite vertex-braided", 0},
      {"report " + fixture("holomorphic.toml") + " --format json", 0},
      {"report " + fixture("joyce.toml"), 0},
      {"report " + fixture("hlinear.toml"), 0},
      {"check " + fixture("bad_kappa.toml") + " --suite vqg", 2},
      {"report " + fixture("bad_syntax.toml"), 2},
      {"report " + fixture("bad_kind.toml"), 2},
      {"check " + fixture("lattice_even.toml") + " --suite vqg --window 3:1", 2},
      {"check " + fixture("lattice_even.toml"), 2},
      {"dims " + fixture("heisenberg1.toml") + " --sector 0 --max-weight 6", 0},
      {"ope " + fixture("heisenberg1.toml") + " --left 'a[1,-1]' --right 'a[1,-1]' --window -3:1", 0},
  };
  if (!std::getenv("VQG_BIN")) return;
  for (const auto& c : cases) {
    auto r = run_bin(c.args);
    REQUIRE(r);
    CHECK_MESSAGE(r->code == c.code, c.args);
  }
  auto a = run_bin("report " + fixture("lattice_even.toml") + " --format json");
  auto b = run_bin("report " + fixture("lattice_even.toml") + " --format json");
  CHECK(a->out == b->out);
}
