#include <gtest/gtest.h>

#include "btv/dsl.hpp"
#include "btv/plan.hpp"
#include "btv/verify.hpp"
#include "support.hpp"

namespace btv::verify {
namespace {

std::string first_summary(const DiffReport& r) {
  const CheckResult* d = r.first_divergence();
  return d ? d->summary() : "";
}

TEST(Diff, EncodingsSmallCorpus) {
  Corpus c = Corpus::with_memory();
  c.max_leaves = 3;
  const DiffReport r = diff_encodings(c, DiffMode::Encodings);
  EXPECT_EQ(r.trees, 145u);
  EXPECT_EQ(r.divergences(), 0u) << first_summary(r);
}

TEST(Diff, WrappedCorpus) {
  Corpus c = Corpus::with_memory();
  c.max_leaves = 2;
  c.wrappers = {Wrapper::Inverter, Wrapper::RunningIsFailure, Wrapper::OneShot};
  for (DiffMode m : {DiffMode::Encodings, DiffMode::Plans}) {
    const DiffReport r = diff_encodings(c, m);
    EXPECT_GT(r.trees, 100u);
    EXPECT_EQ(r.divergences(), 0u) << first_summary(r);
  }
}

TEST(Diff, BtcSmallCorpus) {
  Corpus c = Corpus::btc();
  c.max_leaves = 3;
  const DiffReport r = diff_encodings(c, DiffMode::Btc);
  EXPECT_EQ(r.divergences(), 0u) << first_summary(r);
}

TEST(Diff, BlackboardTrees) {
  std::vector<Tree> trees;
  for (const char* f : {"blackboard_parallel.bt", "blackboard_memory.bt", "blackboard_sync.bt"})
    trees.push_back(dsl::load_file(testing::data_path(f)).tree);
  for (DiffMode m : {DiffMode::Encodings, DiffMode::Plans}) {
    const DiffReport r = diff_trees(trees, m, 3);
    EXPECT_EQ(r.divergences(), 0u) << first_summary(r);
  }
}

TEST(Diff, SingleLeafHoldsEverywhere) {
  const std::vector<Tree> one{Tree::build(leaf("a"))};
  for (DiffMode m : {DiffMode::Encodings, DiffMode::Plans, DiffMode::Btc, DiffMode::Flavors,
                     DiffMode::Binarize})
    EXPECT_EQ(diff_trees(one, m, 3).divergences(), 0u);
}

TEST(Diff, ForgettingScenarioDivergesAcrossFlavors) {
  const Tree t = dsl::load_file(testing::data_path("forgetting.bt")).tree;
  const DiffReport r = diff_trees({t}, DiffMode::Flavors, 3);
  ASSERT_EQ(r.divergences(), 1u);
  const auto& d = std::get<Diverged>(r.first_divergence()->verdict);
  EXPECT_TRUE(replays(d, DiffMode::Flavors));
  EXPECT_EQ(diff_trees({t}, DiffMode::Encodings, 3).divergences(), 0u);
}

TEST(Diff, ReportJson) {
  const Tree t = dsl::load_file(testing::data_path("forgetting.bt")).tree;
  const std::string json = report_json(diff_trees({t}, DiffMode::Flavors, 3), "forgetting");
  EXPECT_NE(json.find("\"divergences\": 1"), std::string::npos) << json;
  EXPECT_NE(json.find("\"tree\""), std::string::npos);
}

// Controls: a harness that cannot see planted bugs proves nothing.

TEST(DiffControl, MutatedPlanIsCaught) {
  const Tree t = Tree::build(selector("s", {leaf("a"), leaf("b")}));
  plan::Plan p = plan::build(t, plan::Family::TotalV3);
  const plan::SymbolId st = *p.status[0];
  const plan::SymbolId act = *p.active[0];
  p.symbols[st].expr = plan::case_of({{plan::op_not(plan::ref(act)), plan::lit(Status::Invalid)}},
                                     plan::lit(Status::Success));
  const auto ref = make_interpreter(t, interp::SemanticsFlavor::PyTrees);
  const auto bad = make_plan(t, p);
  const CheckResult r = compare_runs(*ref, {bad.get()}, 1, Compare::Full);
  ASSERT_TRUE(r.diverged());
  const auto& d = std::get<Diverged>(r.verdict);
  EXPECT_EQ(d.field, "status of s (F vs S)");
  EXPECT_EQ(d.oracle.describe(t), "tick 1: a=F b=F");
}

// Drops the last executed leaf from the second tick on.
class Forgetful : public Simulator {
 public:
  explicit Forgetful(std::unique_ptr<Simulator> inner) : inner_(std::move(inner)) {}
  Forgetful(const Forgetful& o) : inner_(o.inner_->clone()) {}
  std::unique_ptr<Simulator> clone() const override { return std::make_unique<Forgetful>(*this); }
  std::string name() const override { return "forgetful"; }
  const Tree& tree() const override { return inner_->tree(); }
  TickTrace tick(LeafOracle& o) override {
    TickTrace t = inner_->tick(o);
    if (inner_->tick_index() >= 2 && t.executed.size() > 1) t.executed.pop_back();
    return t;
  }
  std::vector<Frame> frames() const override { return inner_->frames(); }
  std::string key() const override { return inner_->key() + std::to_string(inner_->tick_index()); }
  int tick_index() const override { return inner_->tick_index(); }

 private:
  std::unique_ptr<Simulator> inner_;
};

TEST(DiffControl, CorruptedTraceIsCaughtAtTheRightTick) {
  const Tree t = Tree::build(sequence("s", {leaf("a"), leaf("b")}));
  const auto ref = make_interpreter(t, interp::SemanticsFlavor::PyTrees);
  const Forgetful bad(make_total(t));
  const CheckResult r = compare_runs(*ref, {&bad}, 3, Compare::Full);
  ASSERT_TRUE(r.diverged());
  EXPECT_EQ(std::get<Diverged>(r.verdict).tick, 2);
}

}  // namespace
}  // namespace btv::verify
