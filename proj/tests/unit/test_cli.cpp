#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ucp/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ucp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ucp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ucp_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("synth is deterministic and validates") {
  const auto a = run_cli({"synth", "--seed", "5", "--n", "30"});
  const auto b = run_cli({"synth", "--seed", "5", "--n", "30"});
  const auto c = run_cli({"synth", "--seed", "6", "--n", "30"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  const auto dir = scratch("synth");
  spit(dir / "d.csv", a.out);
  const auto v = run_cli({"validate", "--data", (dir / "d.csv").string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("30 projects") != std::string::npos);
}

TEST_CASE("validate rejects bad input with exit code 1") {
  const auto dir = scratch("bad");
  const auto good = run_cli({"synth", "--n", "12"}).out;

  CHECK(run_cli({"validate", "--data", (dir / "missing.csv").string()}).code == 1);

  // drop the effort column from the header
  std::string no_col = good;
  const auto first_nl = no_col.find('\n');
  std::string header = no_col.substr(0, first_nl);
  header.replace(header.find("effort"), 6, "effrot");
  no_col = header + no_col.substr(first_nl);
  spit(dir / "schema.csv", no_col);
  const auto s = run_cli({"validate", "--data", (dir / "schema.csv").string()});
  CHECK(s.code == 1);
  CHECK(s.err.find("effrot") != std::string::npos);

  // an out-of-range factor score on one row
  std::string bad = good + "X1,synthetic,10,100,1,1,0,0,0,0,0,0,0,9,1000\n";
  spit(dir / "row.csv", bad);
  const auto r = run_cli({"validate", "--data", (dir / "row.csv").string()});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());

  CHECK(run_cli({"validate"}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("stats and rq1 write their artifacts") {
  const auto dir = scratch("stats");
  REQUIRE(run_cli({"synth", "--n", "40", "--out", (dir / "d.csv").string()}).code == 0);
  const auto s = run_cli({"stats", "--data", (dir / "d.csv").string(), "--out", (dir / "s").string()});
  REQUIRE(s.code == 0);
  for (const char* f : {"descriptive.csv", "spearman.csv", "pdr_histogram.csv", "pdr_histogram.svg"}) {
    CHECK(fs::exists(dir / "s" / f));
  }
  CHECK(slurp(dir / "s" / "pdr_histogram.svg").find("<svg") != std::string::npos);

  const auto r = run_cli({"rq1", "--data", (dir / "d.csv").string(), "--out", (dir / "r").string()});
  REQUIRE(r.code == 0);
  for (int f = 1; f <= 8; ++f) {
    const auto e = std::to_string(f);
    CHECK(fs::exists(dir / "r" / ("intervals_e" + e + ".csv")));
    CHECK(fs::exists(dir / "r" / ("interval_e" + e + ".svg")));
    CHECK(fs::exists(dir / "r" / ("levels_e" + e + ".svg")));
  }
  CHECK(slurp(dir / "r" / "intervals_e1.csv").rfind("level,count,mean,ci_low,ci_high,ci_defined\n", 0) == 0);
}

TEST_CASE("predict baselines need no data") {
  const auto k = run_cli({"predict", "--model", "karner", "--uaw", "10", "--uucw", "90", "--tcf", "1", "--ef", "1",
                          "--env", "3,3,3,3,3,3,3,3"});
  REQUIRE(k.code == 0);
  CHECK(k.out.find("effort: 2000") != std::string::npos);
  const auto sw = run_cli({"predict", "--model", "sw", "--uaw", "10", "--uucw", "90", "--tcf", "1", "--ef", "1",
                           "--env", "1,1,1,3,3,3,3,3"});
  REQUIRE(sw.code == 0);
  CHECK(sw.out.find("effort: 2800") != std::string::npos);
  CHECK(run_cli({"predict", "--model", "cart", "--uaw", "10", "--uucw", "90", "--tcf", "1", "--ef", "1", "--env",
                 "3,3,3,3,3,3,3,3"})
            .code == 1);
  CHECK(run_cli({"predict", "--model", "karner", "--uaw", "10", "--uucw", "90", "--tcf", "1", "--ef", "1", "--env",
                 "3,3,3"})
            .code == 1);
}

TEST_CASE("predict with a saved predictor reproduces the fit") {
  const auto dir = scratch("predict");
  REQUIRE(run_cli({"synth", "--n", "40", "--out", (dir / "d.csv").string()}).code == 0);
  const std::vector<std::string> x{"--uaw", "12", "--uucw", "250", "--tcf", "0.9", "--ef", "0.85", "--env",
                                   "4,3,2,4,3,2,1,1", "--format", "json"};
  auto fit = std::vector<std::string>{"predict", "--data", (dir / "d.csv").string(), "--scheme", "kmeans",
                                      "--save-predictor", (dir / "p.json").string()};
  fit.insert(fit.end(), x.begin(), x.end());
  const auto a = run_cli(fit);
  REQUIRE(a.code == 0);
  auto load = std::vector<std::string>{"predict", "--predictor", (dir / "p.json").string()};
  load.insert(load.end(), x.begin(), x.end());
  const auto b = run_cli(load);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"members\"") != std::string::npos);
}

TEST_CASE("benchmark single cell writes results and manifest") {
  const auto dir = scratch("bench");
  REQUIRE(run_cli({"synth", "--n", "25", "--out", (dir / "d.csv").string()}).code == 0);
  const auto r = run_cli({"benchmark", "--data", (dir / "d.csv").string(), "--out", (dir / "b").string(), "--scheme",
                          "e1", "--model", "cart", "--seed", "7"});
  REQUIRE(r.code == 0);
  for (const char* f : {"results.csv", "traces.csv", "weights.csv", "outliers.csv", "run.json"}) {
    CHECK(fs::exists(dir / "b" / f));
  }
  CHECK(slurp(dir / "b" / "run.json").find("\"seed\": 7") != std::string::npos);
  CHECK(run_cli({"benchmark", "--data", (dir / "d.csv").string(), "--out", (dir / "b").string(), "--scheme", "e9"})
            .code == 1);
}
