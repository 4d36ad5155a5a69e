#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "btv/benchgen.hpp"
#include "btv/btc_encoding.hpp"
#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/smv.hpp"
#include "support.hpp"

namespace btv::smv {
namespace {

using btv::testing::data_path;
using btv::testing::golden_path;

std::size_t occurrences(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (std::size_t at = text.find(what); at != std::string::npos; at = text.find(what, at + 1)) ++n;
  return n;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "btv_smv_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Smv, GoldenFiles) {
  for (const auto& c : btv::testing::golden_cases()) {
    const std::string text = btv::testing::golden_text(c);
    const std::string path = golden_path(c.file);
    if (btv::testing::update_golden()) {
      write_file(path, text);
      continue;
    }
    ASSERT_TRUE(std::filesystem::exists(path)) << path << " (set BTVERIFY_UPDATE_GOLDEN=1)";
    EXPECT_EQ(dsl::read_file(path), text) << c.file;
  }
}

TEST(Smv, EmissionIsDeterministic) {
  for (const auto& c : btv::testing::golden_cases())
    EXPECT_EQ(btv::testing::golden_text(c), btv::testing::golden_text(c)) << c.file;
  const Tree t = dsl::load_file(data_path("blackboard_parallel.bt")).tree;
  const plan::Plan p = plan::build(t, plan::Family::TotalV3);
  EXPECT_EQ(emit(t, p), emit(t, plan::build(t, plan::Family::TotalV3)));
}

TEST(Smv, SavedBlackboardIncludesToIdenticalBytes) {
  const Tree t = dsl::load_file(data_path("blackboard_parallel.bt")).tree;
  for (plan::Family f : {plan::Family::Leaf, plan::Family::TotalV2, plan::Family::TotalV3}) {
    const plan::Plan p = plan::build(t, f);
    EmitOptions save;
    save.blackboard_mode = BlackboardMode::GenerateAndSave;
    save.blackboard_path = scratch("bb_" + plan::family_name(f) + ".smv").string();
    const std::string first = emit(t, p, save);
    EXPECT_EQ(first, emit(t, p));
    EXPECT_EQ(dsl::read_file(save.blackboard_path), blackboard_module(t, p));

    EmitOptions include = save;
    include.blackboard_mode = BlackboardMode::IncludeFile;
    EXPECT_EQ(emit(t, p, include), first) << plan::family_name(f);
  }
}

TEST(Smv, IncludedBlackboardIsCopiedVerbatim) {
  const Tree t = dsl::load_file(data_path("blackboard_parallel.bt")).tree;
  const plan::Plan p = plan::build(t, plan::Family::TotalV3);
  const auto path = scratch("custom_bb.smv");
  write_file(path.string(), "MODULE blackboard_module(x)\n-- hand written\n");
  EmitOptions opt;
  opt.blackboard_mode = BlackboardMode::IncludeFile;
  opt.blackboard_path = path.string();
  const std::string text = emit(t, p, opt);
  EXPECT_NE(text.find("-- hand written\n"), std::string::npos);
  EXPECT_EQ(occurrences(text, "MODULE blackboard_module"), 1u);
}

TEST(Smv, MissingIncludeFails) {
  const Tree t = dsl::load_file(data_path("blackboard_parallel.bt")).tree;
  EmitOptions opt;
  opt.blackboard_mode = BlackboardMode::IncludeFile;
  opt.blackboard_path = scratch("does_not_exist.smv").string();
  std::filesystem::remove(opt.blackboard_path);
  EXPECT_THROW(emit(t, plan::build(t, plan::Family::TotalV3), opt), Error);
}

TEST(Smv, ChecklistNamesNodesAndBackups) {
  const Tree t = bench::gen_checklist(1);
  const std::string text = emit(t, plan::build(t, plan::Family::TotalV3));
  EXPECT_NE(text.find("safety_check1 : "), std::string::npos);
  EXPECT_NE(text.find("backup1 : "), std::string::npos);
  EXPECT_NE(text.find("MODULE main"), std::string::npos);
  EXPECT_EQ(text.rfind("-- btverify ", 0), 0u);
}

TEST(Smv, BlackboardVariablesDeclaredOnce) {
  const Tree t = dsl::load_file(data_path("blackboard_parallel.bt")).tree;
  for (plan::Family f : {plan::Family::Leaf, plan::Family::TotalV2, plan::Family::TotalV3}) {
    const std::string text = emit(t, plan::build(t, f));
    EXPECT_EQ(occurrences(text, "flag : boolean;"), 1u) << plan::family_name(f);
    EXPECT_EQ(occurrences(text, "level : 0..3;"), 1u) << plan::family_name(f);
    EXPECT_EQ(occurrences(text, "mode : {idle, busy};"), 1u) << plan::family_name(f);
    EXPECT_EQ(occurrences(text, "blackboard : blackboard_module"), 1u);
  }
}

TEST(Smv, ModulesAreSharedBetweenEqualNodes) {
  const Tree t = bench::gen_checklist(3);
  const std::string text = emit(t, plan::build(t, plan::Family::TotalV3));
  EXPECT_EQ(occurrences(text, "MODULE bt_selector("), 1u);
  EXPECT_EQ(occurrences(text, "MODULE bt_sequence("), 1u);
}

TEST(Smv, SpecsAreAppended) {
  const Tree t = bench::gen_checklist(2);
  const std::string specs = bench::to_smv(bench::gen_specs(2, bench::Dialect::Total));
  EmitOptions opt;
  opt.spec_text = specs;
  const std::string text = emit(t, plan::build(t, plan::Family::TotalV2), opt);
  EXPECT_EQ(text.substr(text.size() - specs.size()), specs);
  EXPECT_EQ(occurrences(text, "LTLSPEC"), 4u);
}

TEST(Smv, BtcRejectsBlackboard) {
  const Tree t = dsl::load_file(data_path("blackboard_parallel.bt")).tree;
  const Tree plain = bench::gen_checklist(1, false, ParallelFlavor::Threshold);
  try {
    emit(plain, plan::build(plain, plan::Family::Btc), {BlackboardMode::GenerateAndSave,
                                                        scratch("x.smv").string(), {}, {}});
    FAIL() << "expected UnsupportedError";
  } catch (const UnsupportedError& e) {
    EXPECT_STREQ(e.what(), btc::kBlackboardUnsupported);
  }
  EXPECT_THROW(plan::build(t, plan::Family::Btc), UnsupportedError);
}

TEST(Smv, BtcUsesEnableVariables) {
  const Tree t = bench::gen_checklist(1, false, ParallelFlavor::Threshold);
  const std::string text = emit(t, plan::build(t, plan::Family::Btc));
  EXPECT_NE(text.find("enable"), std::string::npos);
  EXPECT_EQ(text.find("active_node"), std::string::npos);
}

}  // namespace
}  // namespace btv::smv
