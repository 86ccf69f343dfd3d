#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "toricurves/cli.hpp"

using namespace toricurves;

namespace {

struct CliRun {
  int status;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "toricurves");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string fan(const std::string& name) { return std::string(TORICURVES_FAN_DIR) + "/" + name + ".json"; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, AnalyzePlane) {
  const CliRun r = run({"analyze", fan("p2")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "P = 1 − t1·t2·t3")) << r.out;
  EXPECT_TRUE(contains(r.out, "f-vector: (1, 3, 3)"));
  EXPECT_TRUE(contains(r.out, "holds"));
}

TEST(Cli, AnalyzeIncompleteFan) {
  const CliRun r = run({"analyze", fan("a2")});
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(contains(r.err, "not complete")) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, Hom) {
  EXPECT_EQ(run({"hom", fan("p1"), "--degree", "1,1"}).out, "L^3 − L\n");
  EXPECT_EQ(run({"hom", fan("p2"), "--degree", "1,1,0"}).out, "empty: degree not in Eff∨\n");
  EXPECT_EQ(run({"hom", fan("p1"), "--degree", "2,2", "--normalized"}).out, "L − L^{-1}\n");
}

TEST(Cli, Tamagawa) {
  const CliRun r = run({"tamagawa", fan("p1"), "--order", "6"});
  EXPECT_EQ(r.out, "L − L^{-1} (floor −2)\n");
}

TEST(Cli, Converge) {
  const CliRun r = run({"converge", fan("p2"), "--degree", "1,1,1", "--order", "8"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "verdict: pass")) << r.out;
  EXPECT_TRUE(contains(r.out, "delta_dim: 0"));
  EXPECT_TRUE(contains(r.out, "bound: 7/4"));
}

TEST(Cli, Oracle) {
  const CliRun r = run({"oracle", fan("p2"), "--p", "3", "--degree", "1,1,1"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "equal: brute 240, predicted 240")) << r.out;
  const CliRun cfg = run({"oracle", fan("p2"), "--p", "2", "--degree", "1,1,1", "--configurations"});
  EXPECT_TRUE(contains(cfg.out, "equal: brute 24")) << cfg.out;
  const CliRun jet = run({"oracle", fan("p2"), "--p", "3", "--degree", "1,1,1", "--jet", "0,0,1:1:1"});
  EXPECT_TRUE(contains(jet.out, ": 24")) << jet.out << jet.err;
  const CliRun late = run({"oracle", fan("p2"), "--degree", "1,1,1", "--jobs", "2", "--format", "json"});
  ASSERT_EQ(late.status, 0) << late.err;
  EXPECT_EQ(json::parse(late.out)["brute"], "240");
}

TEST(Cli, Constrained) {
  const CliRun r = run({"constrained", fan("p2"), "--jet", "0,0,1:1:1", "--degree", "2,2,2", "--p", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "main term: 1 − L^{-2}")) << r.out;
  EXPECT_TRUE(contains(r.out, "count at p = 3: 648"));
  EXPECT_TRUE(contains(r.out, "error: 0"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).status, 1);
  EXPECT_EQ(run({"frobnicate"}).status, 1);
  EXPECT_EQ(run({"hom", fan("p2"), "--degree", "1,x,1"}).status, 1);
  EXPECT_EQ(run({"hom", fan("p2"), "--degree", "1,1"}).status, 2);
  EXPECT_EQ(run({"hom", "/nonexistent.json", "--degree", "1"}).status, 2);
  EXPECT_EQ(run({"oracle", fan("p2"), "--p", "4", "--degree", "1,1,1"}).status, 1);
  EXPECT_EQ(run({"oracle", fan("p2"), "--degree", "1,1,1", "--jet", "0,0"}).status, 1);
  EXPECT_EQ(run({"--format", "xml", "analyze", fan("p2")}).status, 1);
  const CliRun big = run({"--budget", "100", "oracle", fan("dp6"), "--p", "3", "--degree", "2,2,2,2,2,2", "--configurations"});
  EXPECT_EQ(big.status, 3);
  EXPECT_TRUE(big.out.empty());
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Cli, BudgetFromEnvironment) {
  setenv("TORICURVES_BUDGET", "50", 1);
  EXPECT_EQ(run({"oracle", fan("p2"), "--p", "3", "--degree", "2,2,2"}).status, 3);
  unsetenv("TORICURVES_BUDGET");
  EXPECT_EQ(run({"oracle", fan("p2"), "--p", "3", "--degree", "2,2,2"}).status, 0);
}

TEST(Cli, JsonOutput) {
  const CliRun r = run({"--format", "json", "converge", fan("bl1p2"), "--degree", "1,1,1,2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["pass"], true);
  const ErrorReport back = error_report_from_json(j);
  EXPECT_EQ(to_json(back), j);

  const json o = json::parse(run({"--format", "json", "oracle", fan("p1"), "--p", "2", "--degree", "1,1"}).out);
  EXPECT_EQ(o["brute"], "6");
  EXPECT_TRUE(oracle_report_from_json(o).equal);

  const json a = json::parse(run({"--format", "json", "analyze", fan("dp6")}).out);
  EXPECT_EQ(a["picard_rank"], 4);
  EXPECT_EQ(a["polynomial"]["terms"].size(), 34u);
}

TEST(Cli, MobiusIsomorphismClasses) {
  const CliRun r = run({"mobius", fan("dp6"), "--iso"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "size 3, edges 3, connected")) << r.out;
}
