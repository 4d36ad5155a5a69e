#include <gtest/gtest.h>

#include "btv/benchgen.hpp"
#include "btv/error.hpp"
#include "btv/plan.hpp"
#include "btv/verify.hpp"

namespace btv::plan {
namespace {

TEST(Plan, TotalV2DepthGrowsWithChecklist) {
  int prev = 0;
  for (int n = 1; n <= 10; ++n) {
    const int d = define_depth(build(bench::gen_checklist(n), Family::TotalV2));
    EXPECT_GE(d, prev + 1) << "n=" << n;
    prev = d;
  }
}

TEST(Plan, TotalV3DepthIsBounded) {
  const int base = define_depth(build(bench::gen_checklist(1), Family::TotalV3));
  for (int n = 2; n <= 10; ++n)
    EXPECT_EQ(define_depth(build(bench::gen_checklist(n), Family::TotalV3)), base);
  EXPECT_LE(base, 2);
}

TEST(Plan, V2AndV3AgreeOnChecklist) {
  for (int n = 1; n <= 3; ++n) {
    for (bool par : {false, true}) {
      const Tree t = bench::gen_checklist(n, par);
      const auto v2 = verify::make_plan(t, build(t, Family::TotalV2));
      const auto v3 = verify::make_plan(t, build(t, Family::TotalV3));
      const auto r = verify::compare_runs(*v2, {v3.get()}, 3, verify::Compare::Full);
      EXPECT_TRUE(r.holds()) << r.summary();
    }
  }
}

TEST(Plan, ParallelChecklistMatchesInterpreter) {
  const Tree t = bench::gen_checklist(2, true);
  const auto ref = verify::make_interpreter(t, interp::SemanticsFlavor::PyTrees);
  for (Family f : {Family::Leaf, Family::TotalV2, Family::TotalV3}) {
    const auto sim = verify::make_plan(t, build(t, f));
    EXPECT_TRUE(verify::compare_runs(*ref, {sim.get()}, 3, verify::Compare::Full).holds())
        << family_name(f);
  }
}

TEST(Plan, SurfaceNames) {
  const Tree t = bench::gen_checklist(1, false, ParallelFlavor::Threshold);
  const NodeId backup = *t.find("backup1");
  EXPECT_TRUE(build(t, Family::Leaf).active_node);
  EXPECT_TRUE(build(t, Family::TotalV3).find(backup, "active"));
  EXPECT_TRUE(build(t, Family::Btc).find(backup, "enable"));
  EXPECT_FALSE(build(t, Family::TotalV2).active_node);
}

TEST(Plan, RunnerRejectsValuesOutsideRange) {
  const Tree t = Tree::build(leaf("a", {Status::Success}));
  Plan p = build(t, Family::TotalV3);
  Symbol s;
  s.name = "counter";
  s.scope = Scope::Main;
  s.sort = Sort::range(0, 1);
  s.kind = DeclKind::State;
  s.init = lit_int(0);
  const SymbolId id = p.add(s);
  p.symbols[id].next = add(ref(id), lit_int(1));
  EnumeratingOracle oracle;
  Runner r(t, p);
  r.step(oracle, 0);
  r.step(oracle, 1);
  EXPECT_THROW(r.step(oracle, 2), EncodingError);
}

TEST(Plan, DefineCycleIsReported) {
  const Tree t = Tree::build(leaf("a"));
  Plan p = build(t, Family::TotalV2);
  Symbol a;
  a.name = "x";
  a.scope = Scope::Main;
  const SymbolId x = p.add(a);
  a.name = "y";
  const SymbolId y = p.add(a);
  p.symbols[x].expr = op_not(ref(y));
  p.symbols[y].expr = op_not(ref(x));
  EXPECT_THROW(define_depth(p), EncodingError);
}

}  // namespace
}  // namespace btv::plan
