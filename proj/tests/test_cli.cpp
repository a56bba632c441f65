#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qcone/cli.hpp"
#include "qcone/serialize.hpp"
#include "support.hpp"

using namespace qcone;
using qtest::kSqrt5;

namespace {

struct RunResult {
  int code;
  std::string out, err;
  Json report() const { return Json::parse(out); }
  Json error() const { return Json::parse(err); }
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "qcone_cli_test";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("theta command") {
  auto r = run_cli({"theta", "--graph", "gen:cycle:5", "--variant", "theta"});
  REQUIRE(r.code == 0);
  Json j = r.report();
  CHECK(std::abs(j["result"]["value"].get<double>() - kSqrt5) < 1e-5);
  CHECK(j["result"]["certified"] == true);
  CHECK(j["residuals"]["primal_ok"] == true);
  CHECK(j["version"] == cli::kToolVersion);
  CHECK(j["tol"] == "default");
  CHECK_FALSE(j.contains("timing"));
  CHECK(run_cli({"--timing", "theta", "--graph", "gen:cycle:5"}).report().contains("timing"));
}

TEST_CASE("membership command on a matrix file") {
  std::ostringstream text;
  write_matrix(text, matW());
  auto path = temp_file("W.txt", text.str());
  auto r = run_cli({"membership", "--matrix", path.string(), "--cone", "cspsd"});
  REQUIRE(r.code == 0);
  Json j = r.report();
  CHECK(j["result"]["verdict"] == "NOT_MEMBER");
  const Json& cert = j["result"]["certificate"];
  CHECK(cert["kind"] == "EigenWitness");
  CHECK(std::abs(cert["lambda_min"].get<double>() - (2 - kSqrt5)) < 1e-9);

  auto named = run_cli({"membership", "--matrix", "named:W", "--cone", "cspsd"});
  CHECK(named.report()["result"]["verdict"] == "NOT_MEMBER");
}

TEST_CASE("exact command") {
  auto r = run_cli({"exact", "chif", "--graph", "gen:kneser:5,2"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["result"]["value"] == "5/2");
  CHECK(run_cli({"exact", "alpha", "--graph", "gen:cycle:5"}).report()["result"]["value"] == 2);
}

TEST_CASE("qbound, witness and hierarchy commands") {
  auto s = run_cli({"qbound", "stab", "--graph", "gen:cycle:5", "--cone", "dnn"});
  REQUIRE(s.code == 0);
  CHECK(s.report()["result"]["value"] == 2);
  auto c = run_cli({"qbound", "chrom", "--graph", "gen:cycle:5", "--reduce"});
  REQUIRE(c.code == 0);
  CHECK(c.report()["result"]["value"] == 3);

  auto w = run_cli({"witness", "coloring", "--graph", "gen:cycle:5", "--t", "3", "--colors", "0,1,0,1,2"});
  REQUIRE(w.code == 0);
  CHECK(w.report()["result"]["pass"] == true);
  auto bad = run_cli({"witness", "coloring", "--graph", "gen:cycle:5", "--t", "2", "--colors", "0,1,0,1,0"});
  CHECK(bad.code == 1);
  CHECK(bad.error()["error"]["kind"] == "InvalidColoring");

  auto k = run_cli({"hierarchy", "knc", "--matrix", "named:horn"});
  REQUIRE(k.code == 0);
  CHECK(k.report()["result"]["verdict"] == "NOT_MEMBER");

  auto g = run_cli({"gen", "--graph", "gen:petersen", "--format", "dimacs"});
  REQUIRE(g.code == 0);
  CHECK(parse_dimacs(g.out) == petersen_graph());
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args = {"--seed", "7", "theta", "--graph", "gen:random:8,0.5", "--variant", "plus"};
  auto a = run_cli(args), b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto m1 = run_cli({"membership", "--matrix", "named:horn", "--cone", "cspsd", "--refute-dim", "2"});
  auto m2 = run_cli({"membership", "--matrix", "named:horn", "--cone", "cspsd", "--refute-dim", "2"});
  CHECK(m1.out == m2.out);
}

TEST_CASE("inputs digest round trip") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"theta", "--graph", "gen:cycle:7"},
           {"membership", "--matrix", "named:L", "--cone", "dnn"},
           {"--seed", "3", "exact", "chi", "--graph", "gen:random:7,0.4"}}) {
    auto r = run_cli(args);
    REQUIRE(r.code == 0);
    Json inputs = r.report()["inputs"];
    const std::string digest = inputs["digest"];
    inputs.erase("digest");
    CHECK(fnv1a_hex(canonical_dump(inputs)) == digest);
    if (inputs.contains("graph")) {
      Graph g = graph_from_json(inputs["graph"]);
      const std::string src = inputs["source"];
      CHECK(g == cli::load_graph(src, r.report()["seed"].get<uint64_t>()));
    }
    if (inputs.contains("matrix")) {
      SymMatrix m = sym_from_json(inputs["matrix"]);
      CHECK((m - cli::load_matrix(inputs["source"])).max_abs() < 1e-11);
    }
  }
}

TEST_CASE("non-finite values are refused") {
  Json j = {{"value", std::nan("")}};
  CHECK_THROWS_AS(canonical_dump(j), Error);
  Json inf = {{"a", {1.0, std::numeric_limits<double>::infinity()}}};
  CHECK_THROWS_AS(canonical_dump(inf), Error);
  CHECK(canonical_dump({{"b", -0.0}, {"a", 1.0 / 3}}) == "{\"a\":0.333333333333,\"b\":0}");

  auto path = temp_file("nan.txt", "2\n1 nan\nnan 1\n");
  auto r = run_cli({"membership", "--matrix", path.string(), "--cone", "dnn"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.error()["error"].contains("kind"));
}

TEST_CASE("exit codes and error documents") {
  auto none = run_cli({});
  CHECK(none.code == 2);
  auto unknown = run_cli({"frobnicate"});
  CHECK(unknown.code == 2);
  auto badflag = run_cli({"theta", "--graph", "gen:cycle:5", "--variant", "nope"});
  CHECK(badflag.code == 2);
  CHECK(badflag.error()["error"]["kind"] == "UsageError");
  auto domain = run_cli({"theta", "--graph", "gen:kneser:3,2"});
  CHECK(domain.code == 1);
  CHECK(domain.error()["error"]["kind"] == "InvalidParameter");
  auto missing = run_cli({"theta", "--graph", "/nonexistent/file.col"});
  CHECK(missing.code == 1);
  auto cap = run_cli({"qbound", "chrom", "--graph", "gen:petersen", "--aggregate"});
  CHECK(cap.code == 1);
  CHECK(cap.error()["error"]["kind"] == "SizeCapExceeded");
  auto version = run_cli({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find(cli::kToolVersion) != std::string::npos);
}

TEST_CASE("global flags") {
  auto r = run_cli({"--tol", "1e-9", "--max-iters", "150", "theta", "--graph", "gen:cycle:5"});
  REQUIRE(r.code == 0);
  Json j = r.report();
  CHECK(j["tol"] == 1e-9);
  CHECK(j["max_iters"] == 150);
  CHECK(std::abs(j["result"]["value"].get<double>() - kSqrt5) < 1e-7);
  auto starved = run_cli({"--max-iters", "2", "theta", "--graph", "gen:cycle:5"});
  CHECK(starved.code == 0);
  CHECK(starved.report()["result"]["status"] == "INACCURATE");
  CHECK(default_max_iters() == kDefaultMaxIters);
}
