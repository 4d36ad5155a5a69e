#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "btv/dsl.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;

fs::path workdir() {
  const auto dir = fs::temp_directory_path() / "btv_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, std::string* out = nullptr) {
  const auto log = workdir() / "out.txt";
  const std::string cmd = std::string(BTV_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (out) *out = btv::dsl::read_file(log.string());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, Version) {
  std::string out;
  EXPECT_EQ(run("--version", &out), 0);
  EXPECT_NE(out.find("0.1.0"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("compile --encoding total-v3"), 2);
  EXPECT_EQ(run("compile --encoding nope --tree " + btv::testing::data_path("forgetting.bt")), 2);
}

TEST(Cli, GenerateCompileAndCheck) {
  const auto dir = workdir() / "gen";
  fs::remove_all(dir);
  ASSERT_EQ(run("gen-checklist --n 2 --dialect total --out-dir " + dir.string()), 0);
  const auto tree = dir / "checklist_2.bt";
  const auto specs = dir / "checklist_2.total.ltl";
  ASSERT_TRUE(fs::exists(tree));
  ASSERT_TRUE(fs::exists(specs));

  std::string out;
  ASSERT_EQ(run("compile --encoding total-v3 --tree " + tree.string() + " --specs " + specs.string(), &out), 0);
  EXPECT_NE(out.find("backup1"), std::string::npos);
  EXPECT_NE(out.find("LTLSPEC"), std::string::npos);

  EXPECT_EQ(run("check --encoding total-v2 --tree " + tree.string() + " --spec " + specs.string(), &out), 1);
  EXPECT_NE(out.find("holds: "), std::string::npos);
  EXPECT_NE(out.find("counterexample: "), std::string::npos);
}

TEST(Cli, BtcWithBlackboardFails) {
  std::string out;
  EXPECT_EQ(run("compile --encoding btc --tree " + btv::testing::data_path("blackboard_parallel.bt"), &out), 2);
  EXPECT_NE(out.find("BTCompiler does not support blackboard variables"), std::string::npos);
}

TEST(Cli, SaveThenIncludeBlackboard) {
  const auto bb = workdir() / "bb.smv";
  const auto first = workdir() / "first.smv";
  const auto second = workdir() / "second.smv";
  const std::string tree = btv::testing::data_path("blackboard_parallel.bt");
  ASSERT_EQ(run("compile --encoding leaf --tree " + tree + " --save-blackboard " + bb.string() +
                " --out " + first.string()), 0);
  ASSERT_EQ(run("compile --encoding leaf --tree " + tree + " --blackboard-in " + bb.string() +
                " --out " + second.string()), 0);
  EXPECT_EQ(btv::dsl::read_file(first.string()), btv::dsl::read_file(second.string()));
  EXPECT_EQ(run("compile --encoding leaf --tree " + tree + " --blackboard-in " + bb.string() +
                " --save-blackboard " + bb.string()), 2);
}

TEST(Cli, Simulate) {
  std::string out;
  ASSERT_EQ(run("simulate --ticks 3 --seed 7 --tree " + btv::testing::data_path("memory_chain.bt"), &out), 0);
  EXPECT_NE(out.find("tick 3:"), std::string::npos);
  std::string again;
  run("simulate --ticks 3 --seed 7 --tree " + btv::testing::data_path("memory_chain.bt"), &again);
  EXPECT_EQ(out, again);
}

TEST(Cli, DiffExitCodes) {
  EXPECT_EQ(run("diff --mode encodings --corpus memoryless --max-leaves 2"), 0);
  const auto json = workdir() / "flavors.json";
  EXPECT_EQ(run("diff --mode flavors --tree " + btv::testing::data_path("forgetting.bt") +
                " --json " + json.string()), 1);
  EXPECT_NE(btv::dsl::read_file(json.string()).find("\"divergences\": 1"), std::string::npos);
}

TEST(Cli, BridgeImport) {
  const auto in = workdir() / "bridge.json";
  std::ofstream(in) << R"({"document": {"tree": {"type": "sequence", "name": "s", "memory": false,
    "children": [{"type": "leaf", "name": "a"}, {"type": "leaf", "name": "b"}]}},
    "warnings": ["dropped custom decorator"]})";
  std::string out;
  ASSERT_EQ(run("bridge-import --in " + in.string(), &out), 0);
  EXPECT_NE(out.find("sequence s {"), std::string::npos);
  EXPECT_NE(out.find("dropped custom decorator"), std::string::npos);
}

}  // namespace
