#include <gtest/gtest.h>

#include <map>

#include "btv/benchgen.hpp"
#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/interp.hpp"
#include "support.hpp"

namespace btv {
namespace {

using interp::SemanticsFlavor;

// Scripted statuses by (tick, leaf name); anything else returns the first
// status of the leaf's domain.
class Script : public LeafOracle {
 public:
  Script(const Tree& tree, std::map<std::pair<int, std::string>, Status> plan)
      : tree_(tree), plan_(std::move(plan)) {}

  Status leaf_status(int tick, int, NodeId leaf, StatusSet domain) override {
    const auto it = plan_.find({tick + 1, tree_.name(leaf)});
    return it != plan_.end() ? it->second : domain.members().front();
  }
  int choose_value(int, NodeId, std::size_t, int) override { return 0; }

 private:
  const Tree& tree_;
  std::map<std::pair<int, std::string>, Status> plan_;
};

std::vector<std::string> executed(const Tree& t, const TickTrace& tr) {
  std::vector<std::string> out;
  for (NodeId n : tr.executed) out.push_back(t.name(n));
  return out;
}

using Names = std::vector<std::string>;

TEST(Interp, ChecklistAllSucceed) {
  const Tree t = bench::gen_checklist(2);
  Script oracle(t, {});
  const auto run = interp::run(t, oracle, SemanticsFlavor::PyTrees, 2);
  for (const auto& tick : run) {
    EXPECT_EQ(tick.root(), Status::Success);
    EXPECT_EQ(executed(t, tick), (Names{"safety_check1", "safety_check2"}));
  }
}

TEST(Interp, ChecklistBackupRunsAfterFailedCheck) {
  const Tree t = bench::gen_checklist(2);
  Script oracle(t, {{{1, "safety_check2"}, Status::Failure}});
  const auto tick = interp::run(t, oracle, SemanticsFlavor::PyTrees, 1).front();
  EXPECT_EQ(tick.root(), Status::Success);
  EXPECT_EQ(executed(t, tick), (Names{"safety_check1", "safety_check2", "backup2"}));
}

TEST(Interp, SelectorOrder) {
  const Tree t = bench::gen_checklist(1);
  Script oracle(t, {{{1, "safety_check1"}, Status::Failure}});
  const auto tick = interp::run(t, oracle, SemanticsFlavor::PyTrees, 1).front();
  EXPECT_EQ(executed(t, tick), (Names{"safety_check1", "backup1"}));
  EXPECT_EQ(tick.status[t.find("check1")->index()], Status::Success);
}

TEST(Interp, MemorySequenceResumes) {
  const Tree t = Tree::build(sequence("m", {leaf("a"), leaf("b")}, true));
  Script oracle(t, {{{1, "b"}, Status::Running}, {{2, "b"}, Status::Running}});
  const auto run = interp::run(t, oracle, SemanticsFlavor::PyTrees, 3);
  EXPECT_EQ(executed(t, run[0]), (Names{"a", "b"}));
  EXPECT_EQ(executed(t, run[1]), (Names{"b"}));
  EXPECT_TRUE(run[1].skipped[t.find("a")->index()]);
  EXPECT_EQ(run[2].root(), Status::Success);
  EXPECT_EQ(executed(t, run[2]), (Names{"b"}));
}

TEST(Interp, ForgettingDependsOnFlavor) {
  const Tree t = dsl::load_file(testing::data_path("forgetting.bt")).tree;
  const std::map<std::pair<int, std::string>, Status> plan{{{1, "b"}, Status::Running}};
  Script py(t, plan);
  Script bc(t, plan);
  const auto a = interp::run(t, py, SemanticsFlavor::PyTrees, 2);
  const auto b = interp::run(t, bc, SemanticsFlavor::BtCompiler, 2);
  EXPECT_EQ(a[0].root(), Status::Success);
  EXPECT_EQ(b[0].root(), Status::Success);
  EXPECT_EQ(executed(t, a[1]), (Names{"x", "a", "b"}));
  EXPECT_EQ(executed(t, b[1]), (Names{"x", "b"}));
}

TEST(Interp, SynchronizedParallelHoldsSuccess) {
  const Tree t = Tree::build(parallel("p", {leaf("a"), leaf("b")}, 2, true));
  Script oracle(t, {{{1, "b"}, Status::Running}});
  const auto run = interp::run(t, oracle, SemanticsFlavor::PyTrees, 2);
  EXPECT_EQ(run[0].root(), Status::Running);
  EXPECT_EQ(executed(t, run[1]), (Names{"b"}));
  EXPECT_EQ(run[1].root(), Status::Success);
  EXPECT_THROW(interp::run(t, oracle, SemanticsFlavor::BtCompiler, 1), Error);
}

TEST(Interp, OneShotLatches) {
  const Tree t = Tree::build(oneshot("o", leaf("a")));
  Script oracle(t, {{{1, "a"}, Status::Failure}});
  const auto run = interp::run(t, oracle, SemanticsFlavor::PyTrees, 3);
  EXPECT_EQ(executed(t, run[0]), (Names{"a"}));
  for (int i : {1, 2}) {
    EXPECT_TRUE(run[i].executed.empty());
    EXPECT_EQ(run[i].root(), Status::Failure);
  }
}

TEST(Interp, BlackboardEffectsInExecutionOrder) {
  const auto doc = dsl::parse(R"(
    blackboard { v: int[0..3] }
    sequence r {
      leaf a { effect v on S = 1 }
      leaf b { effect v on tick = {S: 2, F: 3, R: 3} }
    })");
  Script oracle(doc.tree, {});
  const auto run = interp::run(doc.tree, oracle, SemanticsFlavor::PyTrees, 1);
  EXPECT_EQ(run[0].blackboard, std::vector<int>{2});
  EXPECT_EQ(interp::dump(doc.tree, run), "tick 1: root=S executed=[a,b] bb={v=2}\n");
}

TEST(Interp, OracleOutsideDomainIsRejected) {
  const Tree t = Tree::build(leaf("a", {Status::Success}));
  Script oracle(t, {{{1, "a"}, Status::Running}});
  EXPECT_THROW(interp::run(t, oracle, SemanticsFlavor::PyTrees, 1), OracleError);
}

}  // namespace
}  // namespace btv
