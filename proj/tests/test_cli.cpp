#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace testing;
using mechflow::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mechflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("mechflow_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("solve the fixture") {
  const Result r = invoke({"solve", data_path("worked_example.txt"), "--flows"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "cost 9987\n"));
  CHECK(contains(r.out, "cycles 6\n"));
  CHECK(contains(r.out, "certified yes\n"));
  CHECK(contains(r.out, "flow 3 1 44\n"));
}

TEST_CASE("solve reports JSON") {
  const Result r = invoke({"solve", data_path("worked_example.txt"), "--json", "--mode", "per-row", "--descent", "b"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["cost"] == 9987);
  CHECK(j["certified"] == true);
  CHECK(j["mode"] == "per-row");
  CHECK(j["descent"] == "b");
  CHECK(j["flows"].size() == 6);
  CHECK(j["alpha"].size() == 3);
  CHECK(j["beta"].size() == 4);
}

TEST_CASE("error exit codes") {
  CHECK(invoke({"solve", "/nonexistent/instance.txt"}).code == mechflow::cli::kIoError);
  const std::string bad = temp_file("bad.txt", "2 2\n1 x\n");
  const Result r = invoke({"solve", bad});
  CHECK(r.code == mechflow::cli::kParseError);
  CHECK(contains(r.err, "parse error"));
  CHECK(invoke({"solve", temp_file("empty.txt", "")}).code == mechflow::cli::kParseError);
  CHECK(invoke({"frobnicate"}).code == mechflow::cli::kUsage);
  CHECK(invoke({"solve", data_path("worked_example.txt"), "--mode", "sideways"}).code == mechflow::cli::kUsage);
  CHECK(invoke({"solve", data_path("worked_example.txt"), "--descent", "b"}).code == mechflow::cli::kFailure);
  CHECK(invoke({"solve", data_path("worked_example.txt"), "--c-sup", "3"}).code == mechflow::cli::kFailure);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("trace of the fixture matches the golden file") {
  const Result r = invoke({"trace", data_path("worked_example.txt"), "--c-sup", "100"});
  CHECK(r.code == 0);
  CHECK(r.out == read_file(data_path("worked_example_trace.golden")));
}

TEST_CASE("trace of a single cell") {
  const Result r = invoke({"trace", temp_file("one.txt", "1 1\n5\n5\n7\n")});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "1\t1\t1\t1\t5\tQ\tA1\ttermination\n"));
  CHECK_FALSE(contains(r.out, "\n2\t"));
}

TEST_CASE("bounds grid matches the reference table") {
  const Result r = invoke({"bounds"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  for (int m = 1; m <= 10; ++m) {
    int row;
    in >> row;
    CHECK(row == m);
    for (int n = 1; n <= 10; ++n) {
      std::uint64_t v;
      in >> v;
      CHECK(v == kRefinedBounds[m - 1][n - 1]);
    }
  }
  const Result j = invoke({"bounds", "--m-min", "2", "--m-max", "3", "--n-max", "2", "--json"});
  const auto rows = nlohmann::json::parse(j.out);
  CHECK(rows.size() == 4);
  CHECK(rows[3]["z_prime_sup"] == 6);
  CHECK(rows[3]["z_sup"] == 9);
}

TEST_CASE("generate then solve") {
  const std::string worst = temp_file("worst.txt", "");
  REQUIRE(invoke({"generate", "worst-case", "--n", "5", "-o", worst}).code == 0);
  CHECK(contains(invoke({"solve", worst}).out, "cycles 46\n"));

  const Result a = invoke({"generate", "assignment", "--n", "4", "--seed", "3"});
  REQUIRE(a.code == 0);
  const Instance inst = parse_instance(a.out);
  const Result s = invoke({"solve", temp_file("assign.txt", a.out), "--json"});
  const auto j = nlohmann::json::parse(s.out);
  FlowMatrix f = FlowMatrix::Zero(4, 4);
  for (const auto& t : j["flows"]) f(t[0].get<Index>() - 1, t[1].get<Index>() - 1) = t[2].get<Weight>();
  CHECK((f.array() == 0 || f.array() == 1).all());
  CHECK((f.rowwise().sum().array() == 1).all());
  CHECK((f.colwise().sum().array() == 1).all());
  CHECK(j["cost"] == oracle_solve(inst).cost);

  const Result g = invoke({"generate", "random", "--m", "3", "--n", "4", "--a-max", "8", "--b-max", "6", "--seed", "1"});
  CHECK(g.code == 0);
  CHECK(validate(parse_instance(g.out)).ok());
  CHECK(invoke({"generate", "bench", "--n", "12", "--degenerate"}).code == 0);
  CHECK(invoke({"generate", "worst-case", "--n", "1"}).code == mechflow::cli::kFailure);
}

TEST_CASE("verify against the oracle") {
  const Result r = invoke({"verify", data_path("worked_example.txt"), "--mode", "per-row", "--descent", "a"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "agree yes"));
  const auto j = nlohmann::json::parse(invoke({"verify", data_path("worked_example.txt"), "--json"}).out);
  CHECK(j["agree"] == true);
  CHECK(j["oracle_cost"] == 9987);
}

TEST_CASE("verify-each-cycle on a larger random instance") {
  const Result g = invoke({"generate", "bench", "--n", "50", "--seed", "9"});
  const Result r = invoke({"solve", temp_file("n50.txt", g.out), "--verify-each-cycle"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "certified yes"));
}

TEST_CASE("bench output") {
  const Result one = invoke({"bench", "--sizes", "6", "--reps", "1", "--json"});
  REQUIRE(one.code == 0);
  const auto j = nlohmann::json::parse(one.out);
  CHECK(j["rows"][0]["rms_cycles"] == 0.0);
  CHECK(j["rows"][0].contains("mean_solve_seconds"));

  const std::vector<std::string> args{"bench", "--sizes", "5,8", "--reps", "20", "--seed", "4", "--no-timing"};
  const Result x = invoke(args);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  const Result y = invoke(threaded);
  CHECK(x.code == 0);
  CHECK(x.out == y.out);
  CHECK(invoke({"bench", "--reps", "0"}).code == mechflow::cli::kUsage);
}
