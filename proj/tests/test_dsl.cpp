#include <gtest/gtest.h>

#include "btv/benchgen.hpp"
#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "support.hpp"

namespace btv {
namespace {

constexpr const char* kFull = R"(format 1
include blackboard "board.smv"
include specs "specs.ltl"
blackboard {
  flag: bool = true
  level: int[-2..5] = 3
  mode: enum[idle, busy]
}
selector root {
  leaf a { statuses: [S, F] effect flag on S = false }
  sequence memory {
    leaf b { effect level on tick = any  effect mode on F = busy }
    oneshot { c }
  }
  parallel sync threshold=1 flavor=threshold p {
    inverter { d }
    running_is_failure { e }
    decorator map=[F, S, S] { leaf f { statuses: [R] effect level on R = {S: 0, F: 1, R: -2} } }
  }
}
)";

TEST(Dsl, ParsesEveryConstruct) {
  const auto doc = dsl::parse(kFull);
  EXPECT_EQ(doc.blackboard_include, "board.smv");
  EXPECT_EQ(doc.spec_include, "specs.ltl");
  const Tree& t = doc.tree;
  ASSERT_EQ(t.blackboard().size(), 3u);
  EXPECT_EQ(t.blackboard()[1].domain, (Domain{IntRange{-2, 5}}));
  EXPECT_EQ(t.blackboard()[2].initial, 0);
  EXPECT_TRUE(t.is_sequence_with_memory(*t.find("sequence_1")));
  EXPECT_TRUE(t.is_oneshot(*t.find("oneshot_1")));
  const Parallel& p = t.parallel_of(*t.find("p"));
  EXPECT_TRUE(p.synchronized);
  EXPECT_EQ(p.policy.threshold, 1);
  EXPECT_EQ(p.policy.flavor, ParallelFlavor::Threshold);
  EXPECT_EQ(t.leaf_of(*t.find("f")).profile.status_domain, StatusSet{Status::Running});
  const auto& effect = t.leaf_of(*t.find("f")).profile.effects.at(0);
  EXPECT_EQ(std::get<SetFromStatus>(effect.update).values, (std::array<int, 3>{0, 1, -2}));
}

TEST(Dsl, TextRoundTrip) {
  const auto doc = dsl::parse(kFull);
  const std::string text = dsl::serialize(doc);
  EXPECT_EQ(dsl::parse(text), doc);
  EXPECT_EQ(dsl::serialize(dsl::parse(text)), text);
}

TEST(Dsl, JsonRoundTrip) {
  const auto doc = dsl::parse(kFull);
  const std::string json = dsl::serialize_json(doc);
  EXPECT_EQ(dsl::parse_json(json), doc);
  EXPECT_EQ(dsl::serialize_json(dsl::parse_json(json)), json);
}

TEST(Dsl, ChecklistDocumentMatchesGenerator) {
  const auto doc = dsl::parse(R"(
    selector check1 {
      leaf safety_check1 { statuses: [S, F] }
      leaf backup1 { statuses: [S] }
    })");
  EXPECT_EQ(doc.tree, bench::gen_checklist(1));
  EXPECT_EQ(dsl::serialize(bench::gen_checklist(3)),
            dsl::serialize(dsl::parse(dsl::serialize(bench::gen_checklist(3)))));
}

TEST(Dsl, BareLeafPrintsShort) {
  const Tree t = Tree::build(sequence("r", {leaf("a"), leaf("b", {Status::Success})}));
  EXPECT_EQ(dsl::serialize(t),
            "format 1\nsequence r {\n  leaf a\n  leaf b { statuses: [S] }\n}\n");
}

void expect_parse_error(const std::string& text, int line, int column) {
  try {
    dsl::parse(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
  }
}

TEST(Dsl, ErrorPositions) {
  expect_parse_error("sequence r {\n  a\n  b\n", 4, 1);
  expect_parse_error("sequence r {\n  leaf a { statuses: [S, X] }\n}", 2, 26);
  expect_parse_error("sequence r {\n  a\n  a\n}", 3, 3);
  expect_parse_error("sequence r {\n  leaf a { effect v on S = true }\n}", 2, 19);
  expect_parse_error("format 2\nleaf a", 1, 8);
}

TEST(Dsl, StructuralErrorsAfterParsing) {
  EXPECT_THROW(dsl::parse("inverter r { a b }"), Error);
  EXPECT_THROW(dsl::parse("parallel threshold=4 r { a b }"), ValidationError);
}

TEST(Dsl, JsonErrors) {
  try {
    dsl::parse_json("{\"tree\": {\"type\": \"leaf\",}");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  try {
    dsl::parse_json(R"({"format_version": 1, "tree": {"type": "sequence", "name": "r",
                     "children": [{"type": "banana", "name": "a"}]}})");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/tree/children/0/type"), std::string::npos) << e.what();
  }
}

TEST(Dsl, LoadFileDispatchesOnExtension) {
  const auto text = dsl::load_file(testing::data_path("forgetting.bt"));
  EXPECT_EQ(text.tree.size(), 5u);
  EXPECT_THROW(dsl::load_file(testing::data_path("missing.bt")), Error);
}

}  // namespace
}  // namespace btv
