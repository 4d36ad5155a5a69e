#include <gtest/gtest.h>

#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/normalize.hpp"
#include "btv/validate.hpp"
#include "support.hpp"

namespace btv {
namespace {

Tree sample() {
  return Tree::build(sequence("root", {selector("s", {leaf("a"), leaf("b")}),
                                       decorator("inv", StatusMap::inverter(), leaf("c"))}));
}

bool has_rule(const Tree& t, const std::string& rule) {
  for (const auto& v : validate(t))
    if (v.rule == rule) return true;
  return false;
}

TEST(Tree, PreOrderIds) {
  const Tree t = sample();
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t.name(NodeId{1}), "s");
  EXPECT_EQ(t.name(NodeId{4}), "inv");
  EXPECT_EQ(t.parent(NodeId{5}), NodeId{4});
  EXPECT_EQ(t.right_neighbor(NodeId{2}), NodeId{3});
  EXPECT_FALSE(t.right_neighbor(NodeId{3}));
  EXPECT_EQ(t.left_neighbor(NodeId{4}), NodeId{1});
  EXPECT_TRUE(t.in_subtree(NodeId{1}, NodeId{3}));
  EXPECT_FALSE(t.in_subtree(NodeId{1}, NodeId{4}));
  EXPECT_EQ(t.leaves().size(), 3u);
  EXPECT_EQ(Tree::build(t.to_spec()), t);
}

TEST(Tree, ValidateRejectsBadStructure) {
  EXPECT_TRUE(validate(sample()).empty());
  EXPECT_TRUE(has_rule(Tree::build(sequence("r", {leaf("a"), leaf("a")})), "duplicate name"));
  EXPECT_TRUE(has_rule(Tree::build(sequence("r", {})), "composite arity"));
  EXPECT_TRUE(has_rule(Tree::build(parallel("p", {leaf("a"), leaf("b")}, 3)), "threshold out of range"));
  EXPECT_TRUE(has_rule(Tree::build(sequence("next", {leaf("a")})), "invalid name"));
  EXPECT_TRUE(has_rule(Tree::build(sequence("r", {leaf("a", StatusSet{})})), "empty status domain"));

  const BlackboardEffect e{"v", OnTick{}, SetConstant{7}};
  const Tree bad = Tree::build(leaf("a", StatusSet::all(), {e}), {{"v", IntRange{0, 3}, 0}});
  EXPECT_TRUE(has_rule(bad, "effect value out of domain"));
  const Tree missing = Tree::build(leaf("a", StatusSet::all(), {e}));
  EXPECT_TRUE(has_rule(missing, "undeclared variable"));
  EXPECT_THROW(require_valid(missing), ValidationError);
}

TEST(Normalize, BinarizeMakesChains) {
  const Tree t = Tree::build(selector("r", {leaf("a"), leaf("b"), leaf("c"), leaf("d")}));
  const Tree b = binarize(t);
  EXPECT_TRUE(is_binary(b));
  EXPECT_FALSE(is_binary(t));
  EXPECT_EQ(b.leaves().size(), 4u);
  EXPECT_EQ(b.size(), 7u);
  for (const auto& name : {"a", "b", "c", "d"}) EXPECT_TRUE(b.find(name)) << name;
}

TEST(Normalize, BinarizeKeepsParallelPolicy) {
  const Tree all = Tree::build(parallel("p", {leaf("a"), leaf("b"), leaf("c")}, 3));
  for (const Node& n : binarize(all).nodes()) {
    if (const auto* p = std::get_if<Parallel>(&n.kind)) {
      EXPECT_EQ(p->policy.threshold, 2);
    }
  }
  const Tree two = Tree::build(parallel("p", {leaf("a"), leaf("b"), leaf("c")}, 2));
  EXPECT_THROW(binarize(two), ValidationError);
  EXPECT_THROW(binarize(all, BinarizeTarget::Btc), ValidationError);
  EXPECT_NO_THROW(binarize(with_parallel_flavor(all, ParallelFlavor::Threshold), BinarizeTarget::Btc));
}

TEST(Normalize, MemoryChainNeedsFourResumeStates) {
  const Tree t = dsl::load_file(testing::data_path("memory_chain.bt")).tree;
  const ResumeDomain d = memory_resume_domain(t, t.root());
  EXPECT_EQ(d.cardinality(), 4u);
  EXPECT_EQ(d.lazy_cardinality, 6);
  std::vector<std::string> names;
  for (NodeId n : d.resume_points) names.push_back(t.name(n));
  EXPECT_EQ(names, (std::vector<std::string>{"node_w", "node_x", "node_y", "node_z"}));
}

TEST(Normalize, ResumeDomainCountsOnlyRunningLeaves) {
  const StatusSet sf{Status::Success, Status::Failure};
  const Tree t = Tree::build(sequence("m", {leaf("a", sf), leaf("b")}, true));
  const ResumeDomain d = memory_resume_domain(t, t.root());
  ASSERT_EQ(d.cardinality(), 1u);
  EXPECT_EQ(t.name(d.resume_points[0]), "b");
}

}  // namespace
}  // namespace btv
