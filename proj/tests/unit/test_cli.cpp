#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using euclidlab::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("euclidlab_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("report shape") {
  const auto r = run({"check-theorem1", "--primes", "2,3,5", "--exponents", "1,1,1"});
  REQUIRE(r.code == 0);
  const json j = r.report();
  CHECK(j["schema_version"] == "1");
  CHECK(j["command"] == "check-theorem1");
  CHECK(j.contains("tool_version"));
  CHECK(j.contains("timing_ms"));
  CHECK(j["determinism_digest"].get<std::string>().size() == 16);
  CHECK(j["config"]["primes"] == "2,3,5");
  CHECK(j["result"]["holds"] == true);
  REQUIRE(j["result"]["runs"].size() == 2);
  CHECK(j["result"]["runs"][0]["report"]["witness_prime"] == 7);
  CHECK(j["result"]["runs"][1]["report"]["witness_prime"] == 7);
  CHECK(r.err.empty());
}

TEST_CASE("zsigmondy exception report") {
  const auto r = run({"zsigmondy", "--a", "2", "--b", "1", "--n", "6"});
  REQUIRE(r.code == 0);
  const json res = r.report()["result"];
  CHECK(res["primitive_divisors"].empty());
  CHECK(res["exception"] == true);
  CHECK(res["consistent"] == true);
  const auto c = run({"zsigmondy", "--a", "2", "--n", "4", "--method", "cyclotomic"});
  CHECK(c.report()["result"]["primitive_divisors"] == json::array({5}));
}

TEST_CASE("closure with certificates") {
  const auto r = run({"closure", "--seed", "2,3,5", "--epsilon", "+1", "--prime-bound", "100", "--certify", "97"});
  REQUIRE(r.code == 0);
  const json res = r.report()["result"];
  CHECK(res["outcome"] == "covered");
  CHECK(res["covered"] == 25);
  CHECK(res["provenance_verified"] == true);
  CHECK(res["certificates"]["97"].back()["prime"] == 97);
  CHECK(run({"closure", "--certify", "101"}).code == 64);
}

TEST_CASE("exit codes") {
  CHECK(run({"lemma8"}).code == 2);  // (3,2,6,2,3) is outside the classification
  CHECK(run({"lemma8", "--q-bound", "1"}).code == 0);
  CHECK(run({"scan", "--n", "5..6", "--pool", "smallest", "--sizes", "1"}).code == 2);
  CHECK(run({"scan", "--n", "3", "--sizes", "1,2", "--pool-bound", "20", "--exponent-bound", "2", "--signs", "+1,-1"})
            .code == 0);
  const auto budget = run({"scan", "--n", "3..4", "--pool-bound", "40", "--budget", "5"});
  CHECK(budget.code == 3);
  CHECK(budget.report()["result"]["budget_exceeded"]["budget"] == 5);
  CHECK(run({"closure", "--budget", "3"}).code == 3);
  CHECK(run({"pillai", "--budget", "3"}).code == 3);
  CHECK(run({"negative-example"}).code == 0);
  CHECK(run({"example13"}).code == 0);
  CHECK(run({"example14", "--q", "5", "--epsilon", "-1"}).code == 0);
  CHECK(run({"witness", "--primes", "2,3,5", "--sizes", "1"}).report()["result"]["report"]["found"] == false);

  CHECK(run({}).code == 64);
  CHECK(run({"nope"}).code == 64);
  CHECK(run({"zsigmondy"}).code == 64);                             // --a is required
  CHECK(run({"zsigmondy", "--a", "2", "--bogus", "1"}).code == 64);  // unknown flag
  CHECK(run({"zsigmondy", "--a", "1", "--b", "1"}).code == 64);      // domain error
  CHECK(run({"witness", "--primes", "2,3,4"}).code == 64);
  CHECK(run({"scan", "--pool", "weird"}).code == 64);
  CHECK(run({"zsigmondy", "--help"}).code == 0);
}

TEST_CASE("config files") {
  const auto good = temp_file("good.json", "{\n  \"q-bound\": 100,\n  \"x-bound\": 5\n}\n");
  const auto r = run({"lemma8", "--config", good.string()});
  REQUIRE(r.code == 0);
  CHECK(r.report()["config"]["q-bound"] == 100);
  CHECK(r.report()["config"]["x-bound"] == 5);

  // Flags override the file.
  const auto over = run({"lemma8", "--config", good.string(), "--q-bound", "10"});
  CHECK(over.report()["config"]["q-bound"] == 10);
  const auto before = run({"lemma8", "--q-bound", "10", "--config", good.string()});
  CHECK(before.report()["config"]["q-bound"] == 10);

  const auto unknown = temp_file("unknown.json", "{\n  \"q-bound\": 100,\n  \"colour\": 3\n}\n");
  const auto u = run({"lemma8", "--config", unknown.string()});
  CHECK(u.code == 64);
  CHECK(u.err.find("colour") != std::string::npos);
  CHECK(u.err.find(":3:") != std::string::npos);

  const auto broken = temp_file("broken.json", "{\n  \"q-bound\": 100,\n  \"x-bound\": \n}\n");
  const auto b = run({"lemma8", "--config", broken.string()});
  CHECK(b.code == 64);
  CHECK(b.err.find(":4:") != std::string::npos);

  const auto bad_value = temp_file("bad_value.json", "{\"q-bound\": \"many\"}");
  CHECK(run({"lemma8", "--config", bad_value.string()}).code == 64);
  CHECK(run({"lemma8", "--config", "/nonexistent/euclidlab.json"}).code == 64);

  // Arrays are accepted for list options, nested arrays for subset lists.
  const auto lists = temp_file("lists.json", R"({"primes": [2, 3, 5, 7], "extra-subsets": [[1, 2], [3]]})");
  const auto l = run({"check-theorem1", "--config", lists.string()});
  REQUIRE(l.code == 0);
  CHECK(l.report()["config"]["extra-subsets"] == "1,2;3");
}

TEST_CASE("a report's config reproduces its digest") {
  const std::vector<std::vector<std::string>> cases{
      {"closure", "--seed", "2,3,5", "--epsilon", "-1", "--prime-bound", "60"},
      {"scan", "--n", "3", "--sizes", "1,2", "--pool-bound", "20", "--threads", "3"},
      {"pillai", "--b", "3", "--a-max", "30"},
      {"example13", "--q", "3,5", "--seed", "7"},
  };
  for (const auto& args : cases) {
    const auto first = run(args);
    REQUIRE(first.code == 0);
    const auto path = temp_file("report.json", first.out);
    const auto again = run({args.front(), "--config", path.string()});
    REQUIRE(again.code == 0);
    CHECK(again.report()["determinism_digest"] == first.report()["determinism_digest"]);
    CHECK(again.report()["config"] == first.report()["config"]);
  }
}

TEST_CASE("output file and budget environment") {
  const auto path = std::filesystem::temp_directory_path() / "euclidlab_test_out.json";
  std::filesystem::remove(path);
  const auto r = run({"example14", "--q", "3,5", "--output", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["result"]["holds"] == true);

  ::setenv("EUCLIDLAB_BUDGET", "4", 1);
  CHECK(run({"scan", "--n", "3..4", "--pool-bound", "30"}).code == 3);
  // An explicit flag beats the environment.
  CHECK(run({"scan", "--n", "3", "--sizes", "1,2", "--pool-bound", "7", "--budget", "100"}).code == 0);
  ::setenv("EUCLIDLAB_BUDGET", "lots", 1);
  CHECK(run({"scan"}).code == 64);
  ::unsetenv("EUCLIDLAB_BUDGET");
}

TEST_CASE("logs stay off standard output") {
  const auto r = run({"example13", "--verbosity", "1"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.err.empty());
  CHECK_NOTHROW(json::parse(r.out));
}
