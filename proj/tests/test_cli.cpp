#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "harmtree/io.hpp"

using namespace harmtree;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  const auto dir = fs::temp_directory_path() / "harmtree_cli_tests";
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const auto capture = workdir() / "stdout.txt";
  const std::string cmd = std::string(HARMTREE_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

}  // namespace

TEST(Cli, ScheduleReportsPowerIdentities) {
  const auto r = run("schedule --horizon 256");
  ASSERT_EQ(r.status, 0) << r.out;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["steps"].size(), 256u);
  const auto& rows = doc["powers_of_two"];
  ASSERT_GE(rows.size(), 9u);
  for (std::uint64_t N = 0; N <= 8; ++N) {
    EXPECT_EQ(rows[N]["N"].get<std::uint64_t>(), N);
    EXPECT_EQ(rows[N]["r"].get<std::uint64_t>(), (std::uint64_t{2} << N) - 1);
  }
  EXPECT_TRUE(doc["ok"].get<bool>());
}

TEST(Cli, BuildFifteenFollowsTheSchedule) {
  const auto r = run("build --depth 15 --out " + path("f15.json") + " --log " + path("l15.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  const Json log = read_json_file(path("l15.json"));
  std::vector<std::uint64_t> levels;
  for (const auto& st : log["steps"]) {
    levels.push_back(st["r"].get<std::uint64_t>());
    EXPECT_TRUE(st["member"].get<bool>());
  }
  EXPECT_EQ(levels, (std::vector<std::uint64_t>{1, 3, 4, 7, 8, 10, 11, 15}));
  EXPECT_TRUE(log["verified"].get<bool>());
}

TEST(Cli, BuildSaveLoadVerifyRoundTrip) {
  ASSERT_EQ(run("build --depth 9 --branching 3 --out " + path("f9.json") + " --log " + path("l9.json")).status, 0);
  const auto v = run("verify --function " + path("f9.json"));
  EXPECT_EQ(v.status, 0) << v.out;
  EXPECT_TRUE(Json::parse(v.out)["ok"].get<bool>());
}

TEST(Cli, TamperedFunctionFailsVerifyWithOneDiagnostic) {
  ASSERT_EQ(run("build --depth 7 --out " + path("f7.json") + " --log " + path("l7.json")).status, 0);
  Json doc = read_json_file(path("f7.json"));
  ASSERT_TRUE(doc.contains("values"));
  // Vertex 200 is a leaf; its parent is 99.
  auto& cell = doc["values"]["200"];
  cell[0] = to_string(parse_rational(cell[0].get<std::string>()) + 1);
  write_json_file(path("f7_bad.json"), doc);
  const auto v = run("verify --function " + path("f7_bad.json"));
  EXPECT_EQ(v.status, 1) << v.out;
  const Json rep = Json::parse(v.out);
  ASSERT_EQ(rep["harmonic_diagnostics"].size(), 1u);
  EXPECT_EQ(rep["harmonic_diagnostics"][0]["vertex"].get<std::uint64_t>(), 99u);
  EXPECT_FALSE(rep["ok"].get<bool>());
}

TEST(Cli, BuildIsByteDeterministic) {
  for (const char* extra : {"", " --space product --dim 2 --targets-seed 5", " --random-tree 3 --max-branching 3"}) {
    const std::string base = std::string("build --depth 8") + extra;
    ASSERT_EQ(run(base + " --out " + path("a.json") + " --log " + path("a.log")).status, 0) << extra;
    ASSERT_EQ(run(base + " --out " + path("b.json") + " --log " + path("b.log")).status, 0) << extra;
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json"))) << extra;
    EXPECT_EQ(slurp(path("a.log")), slurp(path("b.log"))) << extra;
  }
}

TEST(Cli, GenTreeRoundTrip) {
  ASSERT_EQ(run("gen-tree --branching 2 --depth 3 --weights 1/4,3/4 --out " + path("t.json")).status, 0);
  const Tree t = tree_from_json(read_json_file(path("t.json")));
  EXPECT_TRUE(t == build_homogeneous(2, 3, {Rational(1, 4), Rational(3, 4)}));
  EXPECT_EQ(run("build --tree " + path("t.json") + " --out " + path("ft.json") + " --log " + path("lt.json")).status, 0);
}

TEST(Cli, BadTreeFileIsAnError) {
  Json doc = tree_to_json(build_homogeneous(2, 2));
  doc["vertices"][2]["children"][0]["weight"] = "1/3";
  write_json_file(path("bad_tree.json"), doc);
  const auto r = run("build --tree " + path("bad_tree.json") + " --out " + path("x.json"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("5/6"), std::string::npos) << r.out;
  std::ofstream(path("garbage.json")) << "{\n\"root\": 0,,\n}";
  const auto g = run("verify --function " + path("garbage.json"));
  EXPECT_EQ(g.status, 2);
  EXPECT_NE(g.out.find("garbage.json:2:"), std::string::npos) << g.out;
}

TEST(Cli, BuildXReachesItsThreshold) {
  const auto r = run("build-x --depth 12 --target-const 1 --epsilon 1/4 --m 4 --out " + path("x.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  const Json rep = Json::parse(r.out);
  EXPECT_EQ(rep["N0"].get<std::uint64_t>(), 9u);
  EXPECT_TRUE(rep["achieved"].get<bool>());
}

TEST(Cli, AnalyzeAndExport) {
  ASSERT_EQ(run("build --depth 11 --out " + path("f11.json") + " --log " + path("l11.json")).status, 0);
  const auto a = run("analyze --function " + path("f11.json") + " --target-index 1 --epsilon 1/2 --csv " + path("a.csv"));
  ASSERT_EQ(a.status, 0) << a.out;
  const Json rep = Json::parse(a.out);
  std::vector<std::uint64_t> idx = rep["indices"].get<std::vector<std::uint64_t>>();
  for (std::uint64_t lvl : {1, 4, 8, 11}) EXPECT_TRUE(std::count(idx.begin(), idx.end(), lvl)) << lvl;
  EXPECT_FALSE(slurp(path("a.csv")).empty());
  const auto e = run("export --function " + path("f11.json") + " --level 3 --out " + path("w3.json"));
  ASSERT_EQ(e.status, 0) << e.out;
  const Json w3 = read_json_file(path("w3.json"));
  EXPECT_EQ(w3["level"], 3);
  EXPECT_EQ(w3["values"].size(), 8u);
}

TEST(Cli, SpanRunsAndPasses) {
  const auto r = run("span --depth 11 --dim 2 --coeffs 1,1 --target-const 0 --M 2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(Json::parse(r.out)["inclusion_holds"].get<bool>());
}

TEST(Cli, CommandsAreCallableInProcess) {
  std::ostringstream out;
  cli::ScheduleConfig cfg;
  cfg.horizon = 16;
  EXPECT_EQ(cli::cmd_schedule(cfg, out), 0);
  EXPECT_EQ(Json::parse(out.str())["steps"].size(), 16u);
  EXPECT_EQ(cli::parse_fraction_list("1/2, -3,4/6"), (std::vector<Rational>{Rational(1, 2), -3, Rational(2, 3)}));
  EXPECT_THROW(cli::parse_fraction_list("1/2,,3"), std::invalid_argument);
}
