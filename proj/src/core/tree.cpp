#include "btv/tree.hpp"

#include <algorithm>

#include "btv/error.hpp"

namespace btv {

std::optional<Status> parse_status(std::string_view text) {
  if (text == "S" || text == "success") return Status::Success;
  if (text == "F" || text == "failure") return Status::Failure;
  if (text == "R" || text == "running") return Status::Running;
  if (text == "I" || text == "invalid") return Status::Invalid;
  return std::nullopt;
}

int domain_size(const Domain& d) {
  return std::visit(
      [](const auto& dom) -> int {
        using T = std::decay_t<decltype(dom)>;
        if constexpr (std::is_same_v<T, BoolDomain>) {
          return 2;
        } else if constexpr (std::is_same_v<T, IntRange>) {
          return dom.hi - dom.lo + 1;
        } else {
          return static_cast<int>(dom.labels.size());
        }
      },
      d);
}

int domain_value(const Domain& d, int index) {
  if (const auto* r = std::get_if<IntRange>(&d)) return r->lo + index;
  return index;
}

bool domain_contains(const Domain& d, int value) {
  if (const auto* r = std::get_if<IntRange>(&d)) return value >= r->lo && value <= r->hi;
  return value >= 0 && value < domain_size(d);
}

std::string format_value(const Domain& d, int value) {
  if (std::holds_alternative<BoolDomain>(d)) return value != 0 ? "true" : "false";
  if (const auto* e = std::get_if<EnumDomain>(&d)) {
    if (value >= 0 && value < static_cast<int>(e->labels.size())) return e->labels[value];
  }
  return std::to_string(value);
}

bool effect_fires(const BlackboardEffect& e, Status leaf_status) {
  if (std::holds_alternative<OnTick>(e.trigger)) return true;
  return std::get<OnStatus>(e.trigger).status == leaf_status;
}

std::string kind_name(const NodeKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Selector>) return "selector";
        else if constexpr (std::is_same_v<T, Sequence>) return "sequence";
        else if constexpr (std::is_same_v<T, Parallel>) return "parallel";
        else if constexpr (std::is_same_v<T, Decorator>) {
          return std::holds_alternative<OneShot>(k.kind) ? "oneshot" : "decorator";
        } else {
          return "leaf";
        }
      },
      kind);
}

NodeSpec leaf(std::string name, StatusSet domain, std::vector<BlackboardEffect> effects) {
  return NodeSpec{std::move(name), Leaf{LeafProfile{domain, std::move(effects)}}, {}};
}

NodeSpec selector(std::string name, std::vector<NodeSpec> children, bool memory) {
  return NodeSpec{std::move(name), Selector{memory}, std::move(children)};
}

NodeSpec sequence(std::string name, std::vector<NodeSpec> children, bool memory) {
  return NodeSpec{std::move(name), Sequence{memory}, std::move(children)};
}

NodeSpec parallel(std::string name, std::vector<NodeSpec> children, int threshold,
                  bool synchronized, ParallelFlavor flavor) {
  return NodeSpec{std::move(name), Parallel{synchronized, ParallelPolicy{threshold, flavor}},
                  std::move(children)};
}

NodeSpec decorator(std::string name, StatusMap map, NodeSpec child) {
  NodeSpec spec{std::move(name), Decorator{map}, {}};
  spec.children.push_back(std::move(child));
  return spec;
}

NodeSpec oneshot(std::string name, NodeSpec child) {
  NodeSpec spec{std::move(name), Decorator{OneShot{}}, {}};
  spec.children.push_back(std::move(child));
  return spec;
}

namespace {

void append(std::vector<Node>& nodes, const NodeSpec& spec, std::optional<NodeId> parent,
            std::size_t child_index) {
  const NodeId id{static_cast<std::uint32_t>(nodes.size())};
  nodes.push_back(Node{id, spec.name, spec.kind, parent, {}, child_index, id});
  for (std::size_t i = 0; i < spec.children.size(); ++i) {
    const NodeId child{static_cast<std::uint32_t>(nodes.size())};
    nodes[id.index()].children.push_back(child);
    append(nodes, spec.children[i], id, i);
  }
  nodes[id.index()].subtree_end = NodeId{static_cast<std::uint32_t>(nodes.size())};
}

}  // namespace

Tree Tree::build(const NodeSpec& root, std::vector<BlackboardDecl> blackboard) {
  Tree tree;
  append(tree.nodes_, root, std::nullopt, 0);
  tree.blackboard_ = std::move(blackboard);
  return tree;
}

std::optional<NodeId> Tree::first_child(NodeId n) const {
  const auto& c = node(n).children;
  if (c.empty()) return std::nullopt;
  return c.front();
}

std::optional<NodeId> Tree::last_child(NodeId n) const {
  const auto& c = node(n).children;
  if (c.empty()) return std::nullopt;
  return c.back();
}

std::optional<NodeId> Tree::left_neighbor(NodeId n) const {
  const auto p = parent(n);
  const std::size_t i = node(n).child_index;
  if (!p || i == 0) return std::nullopt;
  return node(*p).children[i - 1];
}

std::optional<NodeId> Tree::right_neighbor(NodeId n) const {
  const auto p = parent(n);
  if (!p) return std::nullopt;
  const auto& siblings = node(*p).children;
  const std::size_t i = node(n).child_index + 1;
  if (i >= siblings.size()) return std::nullopt;
  return siblings[i];
}

std::vector<NodeId> Tree::ancestors(NodeId n) const {
  std::vector<NodeId> out;
  for (auto p = parent(n); p; p = parent(*p)) out.push_back(*p);
  return out;
}

std::optional<NodeId> Tree::find(std::string_view name) const {
  for (const auto& n : nodes_)
    if (n.name == name) return n.id;
  return std::nullopt;
}

std::vector<NodeId> Tree::leaves() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (is_leaf(n.id)) out.push_back(n.id);
  return out;
}

bool Tree::is_selector_with_memory(NodeId n) const {
  const auto* s = std::get_if<Selector>(&kind(n));
  return s && s->memory;
}

bool Tree::is_sequence_with_memory(NodeId n) const {
  const auto* s = std::get_if<Sequence>(&kind(n));
  return s && s->memory;
}

bool Tree::is_synchronized_parallel(NodeId n) const {
  const auto* p = std::get_if<Parallel>(&kind(n));
  return p && p->synchronized;
}

bool Tree::is_oneshot(NodeId n) const {
  const auto* d = std::get_if<Decorator>(&kind(n));
  return d && std::holds_alternative<OneShot>(d->kind);
}

std::optional<std::size_t> Tree::find_variable(std::string_view name) const {
  for (std::size_t i = 0; i < blackboard_.size(); ++i)
    if (blackboard_[i].name == name) return i;
  return std::nullopt;
}

NodeSpec Tree::to_spec(NodeId n) const {
  NodeSpec spec{node(n).name, node(n).kind, {}};
  for (NodeId c : children(n)) spec.children.push_back(to_spec(c));
  return spec;
}

NodeSpec Tree::to_spec() const { return to_spec(root()); }

}  // namespace btv
