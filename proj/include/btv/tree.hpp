#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "btv/status.hpp"

namespace btv {

/// Dense pre-order index of a node. The root is always 0.
struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
  constexpr std::size_t index() const { return value; }
};

// ---------------------------------------------------------------------------
// Blackboard
// ---------------------------------------------------------------------------

struct BoolDomain {
  bool operator==(const BoolDomain&) const = default;
};
struct IntRange {
  int lo = 0;
  int hi = 0;
  bool operator==(const IntRange&) const = default;
};
struct EnumDomain {
  std::vector<std::string> labels;
  bool operator==(const EnumDomain&) const = default;
};
using Domain = std::variant<BoolDomain, IntRange, EnumDomain>;

/// Values are stored as ints: booleans as 0/1, ranges verbatim, enums by label index.
int domain_size(const Domain& d);
int domain_value(const Domain& d, int index);
bool domain_contains(const Domain& d, int value);
std::string format_value(const Domain& d, int value);

struct BlackboardDecl {
  std::string name;
  Domain domain;
  int initial = 0;
  bool operator==(const BlackboardDecl&) const = default;
};

struct OnTick {
  bool operator==(const OnTick&) const = default;
};
struct OnStatus {
  Status status = Status::Success;
  bool operator==(const OnStatus&) const = default;
};
using EffectTrigger = std::variant<OnTick, OnStatus>;

struct NondetInDomain {
  bool operator==(const NondetInDomain&) const = default;
};
struct SetConstant {
  int value = 0;
  bool operator==(const SetConstant&) const = default;
};
/// Value written depends on the status the leaf returned, indexed S, F, R.
struct SetFromStatus {
  std::array<int, 3> values{};
  bool operator==(const SetFromStatus&) const = default;
};
using EffectUpdate = std::variant<NondetInDomain, SetConstant, SetFromStatus>;

struct BlackboardEffect {
  std::string variable;
  EffectTrigger trigger;
  EffectUpdate update;
  bool operator==(const BlackboardEffect&) const = default;
};

bool effect_fires(const BlackboardEffect& e, Status leaf_status);

// ---------------------------------------------------------------------------
// Node kinds
// ---------------------------------------------------------------------------

struct Selector {
  bool memory = false;
  bool operator==(const Selector&) const = default;
};

struct Sequence {
  bool memory = false;
  bool operator==(const Sequence&) const = default;
};

/// PyTrees: fail on any child failure. Threshold: fail once the threshold is unreachable.
enum class ParallelFlavor : std::uint8_t { PyTrees, Threshold };

struct ParallelPolicy {
  int threshold = 1;
  ParallelFlavor flavor = ParallelFlavor::PyTrees;
  bool operator==(const ParallelPolicy&) const = default;
};

struct Parallel {
  bool synchronized = false;
  ParallelPolicy policy;
  bool operator==(const Parallel&) const = default;
};

/// Total map over the running statuses, indexed S, F, R.
struct StatusMap {
  std::array<Status, 3> to{Status::Success, Status::Failure, Status::Running};

  Status apply(Status s) const { return s == Status::Invalid ? s : to[run_index(s)]; }

  static StatusMap inverter() { return {{Status::Failure, Status::Success, Status::Running}}; }
  static StatusMap running_is_failure() {
    return {{Status::Success, Status::Failure, Status::Failure}};
  }
  bool operator==(const StatusMap&) const = default;
};

/// Runs its child until the child first returns Success or Failure, then
/// keeps returning that status without ticking the child again.
struct OneShot {
  bool operator==(const OneShot&) const = default;
};

struct Decorator {
  std::variant<StatusMap, OneShot> kind;
  bool operator==(const Decorator&) const = default;
};

struct LeafProfile {
  StatusSet status_domain = StatusSet::all();
  std::vector<BlackboardEffect> effects;
  bool operator==(const LeafProfile&) const = default;
};

struct Leaf {
  LeafProfile profile;
  bool operator==(const Leaf&) const = default;
};

using NodeKind = std::variant<Selector, Sequence, Parallel, Decorator, Leaf>;

/// Short human-readable kind name ("selector", "parallel", ...).
std::string kind_name(const NodeKind& kind);

/// Recursive description used to build trees.
struct NodeSpec {
  std::string name;
  NodeKind kind;
  std::vector<NodeSpec> children;
  bool operator==(const NodeSpec&) const = default;
};

NodeSpec leaf(std::string name, StatusSet domain = StatusSet::all(),
              std::vector<BlackboardEffect> effects = {});
NodeSpec selector(std::string name, std::vector<NodeSpec> children, bool memory = false);
NodeSpec sequence(std::string name, std::vector<NodeSpec> children, bool memory = false);
NodeSpec parallel(std::string name, std::vector<NodeSpec> children, int threshold,
                  bool synchronized = false,
                  ParallelFlavor flavor = ParallelFlavor::PyTrees);
NodeSpec decorator(std::string name, StatusMap map, NodeSpec child);
NodeSpec oneshot(std::string name, NodeSpec child);

struct Node {
  NodeId id;
  std::string name;
  NodeKind kind;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  std::size_t child_index = 0;  // position among the parent's children
  NodeId subtree_end;           // one past the last pre-order descendant
};

/// Immutable rooted ordered tree with pre-order node ids.
class Tree {
 public:
  /// Assigns ids in pre-order. Structural rules are checked by validate().
  static Tree build(const NodeSpec& root, std::vector<BlackboardDecl> blackboard = {});

  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return NodeId{0}; }
  const Node& node(NodeId n) const { return nodes_[n.index()]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::string& name(NodeId n) const { return node(n).name; }
  const NodeKind& kind(NodeId n) const { return node(n).kind; }

  std::optional<NodeId> parent(NodeId n) const { return node(n).parent; }
  std::span<const NodeId> children(NodeId n) const { return node(n).children; }
  std::optional<NodeId> first_child(NodeId n) const;
  std::optional<NodeId> last_child(NodeId n) const;
  std::optional<NodeId> left_neighbor(NodeId n) const;
  std::optional<NodeId> right_neighbor(NodeId n) const;
  /// Strict ancestors, nearest first.
  std::vector<NodeId> ancestors(NodeId n) const;
  bool in_subtree(NodeId root, NodeId n) const {
    return n >= root && n < node(root).subtree_end;
  }
  std::optional<NodeId> find(std::string_view name) const;
  std::vector<NodeId> leaves() const;

  bool is_leaf(NodeId n) const { return std::holds_alternative<Leaf>(kind(n)); }
  bool is_selector(NodeId n) const { return std::holds_alternative<Selector>(kind(n)); }
  bool is_sequence(NodeId n) const { return std::holds_alternative<Sequence>(kind(n)); }
  bool is_parallel(NodeId n) const { return std::holds_alternative<Parallel>(kind(n)); }
  bool is_decorator(NodeId n) const { return std::holds_alternative<Decorator>(kind(n)); }
  bool is_composite(NodeId n) const { return is_selector(n) || is_sequence(n) || is_parallel(n); }
  bool is_selector_with_memory(NodeId n) const;
  bool is_sequence_with_memory(NodeId n) const;
  bool is_memory_composite(NodeId n) const {
    return is_selector_with_memory(n) || is_sequence_with_memory(n);
  }
  bool is_synchronized_parallel(NodeId n) const;
  bool is_oneshot(NodeId n) const;

  const Leaf& leaf_of(NodeId n) const { return std::get<Leaf>(kind(n)); }
  const Parallel& parallel_of(NodeId n) const { return std::get<Parallel>(kind(n)); }
  const Decorator& decorator_of(NodeId n) const { return std::get<Decorator>(kind(n)); }

  const std::vector<BlackboardDecl>& blackboard() const { return blackboard_; }
  std::optional<std::size_t> find_variable(std::string_view name) const;

  /// Inverse of build().
  NodeSpec to_spec() const;
  NodeSpec to_spec(NodeId n) const;

  bool operator==(const Tree& other) const {
    return to_spec() == other.to_spec() && blackboard_ == other.blackboard_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<BlackboardDecl> blackboard_;
};

}  // namespace btv

template <>
struct std::hash<btv::NodeId> {
  std::size_t operator()(btv::NodeId n) const noexcept { return n.value; }
};
