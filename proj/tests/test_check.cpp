#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "btv/benchgen.hpp"
#include "btv/error.hpp"
#include "btv/verify.hpp"

namespace btv::verify {
namespace {

namespace fs = std::filesystem;

TEST(Ltl, ParsesTemplates) {
  const auto f = ltl::parse("LTLSPEC G (a.status = failure -> b.status = success);");
  ASSERT_EQ(f.op, ltl::Formula::Op::Globally);
  ASSERT_EQ(f.args[0].op, ltl::Formula::Op::Implies);
  EXPECT_EQ(f.args[0].args[0].atom.path, "a.status");
  EXPECT_EQ(f.args[0].args[1].atom.literal, "success");
  EXPECT_EQ(ltl::to_string(f), "G (a.status = failure -> b.status = success)");
}

TEST(Ltl, Precedence) {
  const auto f = ltl::parse("G (x.active = TRUE | y.active = TRUE & !z.active = TRUE)");
  ASSERT_EQ(f.args[0].op, ltl::Formula::Op::Or);
  EXPECT_EQ(f.args[0].args[1].op, ltl::Formula::Op::And);
  const auto u = ltl::parse("G (!(active_node = -1) U b.status = success)");
  ASSERT_EQ(u.args[0].op, ltl::Formula::Op::Until);
  EXPECT_EQ(u.args[0].args[0].args[0].atom.literal, "-1");
}

TEST(Ltl, RoundTripsGeneratedSpecs) {
  for (auto d : {Dialect::Btc, Dialect::Leaf, Dialect::Total})
    for (const auto& p : bench::gen_specs(3, d)) {
      EXPECT_EQ(ltl::to_string(ltl::parse(p.true_spec)), p.true_spec);
      EXPECT_EQ(ltl::to_string(ltl::parse(p.false_spec)), p.false_spec);
    }
}

TEST(Ltl, SplitSpecs) {
  const std::string text = "-- header\nLTLSPEC G (a.status = success);\nLTLSPEC\n  G (b.status = failure);\n";
  const auto specs = ltl::split_specs(text);
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_EQ(ltl::to_string(ltl::parse(specs[1])), "G (b.status = failure)");
  EXPECT_EQ(ltl::split_specs("G (a.status = success)\n\nG (b.status = success)\n").size(), 2u);
}

TEST(Ltl, RejectsOtherOperators) {
  EXPECT_THROW(ltl::parse("F (a.status = success)"), UnsupportedError);
  EXPECT_THROW(ltl::parse("G (X a.status = success)"), UnsupportedError);
  EXPECT_THROW(ltl::parse("G (a.status = )"), Error);
}

TEST(TemplateCheck, ChecklistSpecs) {
  const Tree t = bench::gen_checklist(3);
  for (auto d : {Dialect::Leaf, Dialect::Total}) {
    const auto sim = simulator_for(t, d);
    const auto p = bench::gen_specs(3, d)[1];
    EXPECT_TRUE(check_template_spec(*sim, ltl::parse(p.true_spec), 3).holds()) << p.true_spec;
    const auto r = check_template_spec(*sim, ltl::parse(p.false_spec), 3);
    ASSERT_TRUE(std::holds_alternative<CounterexampleFound>(r.verdict)) << p.false_spec;
    const auto& cx = std::get<CounterexampleFound>(r.verdict);
    EXPECT_FALSE(cx.trace.empty());
    EXPECT_NE(cx.description.find("safety_check2=F"), std::string::npos) << cx.description;
  }
}

TEST(TemplateCheck, BtcChecklistSpecs) {
  const Tree t = bench::gen_checklist(2, true, ParallelFlavor::Threshold);
  const auto sim = simulator_for(t, Dialect::Btc);
  for (const auto& p : bench::gen_specs(2, Dialect::Btc)) {
    EXPECT_TRUE(check_template_spec(*sim, ltl::parse(p.true_spec), 3).holds());
    EXPECT_FALSE(check_template_spec(*sim, ltl::parse(p.false_spec), 3).holds());
  }
}

TEST(TemplateCheck, CounterexampleReplays) {
  const Tree t = bench::gen_checklist(2);
  const auto sim = simulator_for(t, Dialect::Total);
  const auto r = check_template_spec(*sim, ltl::parse(bench::gen_specs(2, Dialect::Total)[0].false_spec), 3);
  ASSERT_TRUE(std::holds_alternative<CounterexampleFound>(r.verdict));
  const auto& cx = std::get<CounterexampleFound>(r.verdict);
  ReplayOracle oracle(cx.oracle);
  auto again = simulator_for(t, Dialect::Total);
  for (const auto& expected : cx.trace) EXPECT_EQ(again->tick(oracle), expected);
}

TEST(TemplateCheck, UnknownNodeIsAnError) {
  const Tree t = bench::gen_checklist(1);
  const auto sim = simulator_for(t, Dialect::Total);
  EXPECT_THROW(check_template_spec(*sim, ltl::parse("G (nope.status = success)"), 3), Error);
  EXPECT_THROW(check_template_spec(*sim, ltl::parse("a.status = success"), 3), UnsupportedError);
}

TEST(Smoke, SkipsWithoutExecutable) {
  const char* saved = std::getenv("BTVERIFY_NUXMV");
  const std::string keep = saved ? saved : "";
  ::unsetenv("BTVERIFY_NUXMV");
  EXPECT_EQ(nuxmv_smoke("model.smv").status, SmokeStatus::Skip);
  if (saved) ::setenv("BTVERIFY_NUXMV", keep.c_str(), 1);
}

fs::path fake_tool(const std::string& name, const std::string& body) {
  const auto dir = fs::temp_directory_path() / "btv_fake_tools";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << "#!/bin/sh\n" << body;
  fs::permissions(path, fs::perms::owner_all);
  return path;
}

TEST(Smoke, ParsesVerdicts) {
  const auto tool = fake_tool("ok.sh",
                              "echo '-- specification G (a) is true'\n"
                              "echo '-- specification G (b) is false'\n");
  const auto r = nuxmv_smoke("model.smv", true, tool.string());
  EXPECT_EQ(r.status, SmokeStatus::Pass);
  EXPECT_EQ(r.verdicts, (std::vector<bool>{true, false}));
}

TEST(Smoke, FailsOnErrorOutput) {
  EXPECT_EQ(nuxmv_smoke("m.smv", false, fake_tool("err.sh", "echo 'ERROR: bad'\n").string()).status,
            SmokeStatus::Fail);
  EXPECT_EQ(nuxmv_smoke("m.smv", false, fake_tool("rc.sh", "exit 3\n").string()).status,
            SmokeStatus::Fail);
}

}  // namespace
}  // namespace btv::verify
