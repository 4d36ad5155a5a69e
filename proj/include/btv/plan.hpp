#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btv/oracle.hpp"
#include "btv/trace.hpp"
#include "btv/tree.hpp"

namespace btv::plan {

/// Symbolic form of an encoding: typed symbols with SMV-style init/next
/// assignments. The SMV emitter prints it; interpret() executes it.

struct Sort {
  enum class Kind { Bool, Status, Range, Enum };
  Kind kind = Kind::Bool;
  int lo = 0;
  int hi = 0;
  std::vector<std::string> labels;

  static Sort boolean() { return {}; }
  static Sort status() { return {Kind::Status, 0, 0, {}}; }
  static Sort range(int lo, int hi) { return {Kind::Range, lo, hi, {}}; }
  static Sort enumeration(std::vector<std::string> labels) {
    return {Kind::Enum, 0, 0, std::move(labels)};
  }
  bool operator==(const Sort&) const = default;
};

using SymbolId = std::uint32_t;

struct Expr {
  enum class Op {
    Const,      // value, rendered by `sort`
    Ref,        // symbol; `next` reads the value of the step being computed
    Not,
    And,
    Or,
    Eq,
    Neq,
    Lt,
    Ge,
    Add,
    Count,      // number of true arguments
    Case,       // cond0, val0, cond1, val1, ..., default
    SetChoice,  // nondeterministic pick among constant args
  };
  Op op = Op::Const;
  int value = 0;
  Sort::Kind sort = Sort::Kind::Bool;  // of a Const
  std::string label;                   // enum label of a Const
  SymbolId symbol = 0;
  bool next = false;
  std::vector<Expr> args;
  // SetChoice metadata: a leaf status pick, or a blackboard effect pick.
  std::optional<NodeId> leaf;
  std::optional<std::size_t> effect;
  // Const holding the id of this node (Leaf cursor comparisons).
  std::optional<NodeId> node;
};

Expr lit(bool b);
Expr lit(Status s);
Expr lit_int(int v);
Expr lit_node(NodeId n);
Expr lit_value(const Domain& d, int v);
Expr ref(SymbolId s);
Expr next_ref(SymbolId s);
Expr op_not(Expr e);
Expr op_and(std::vector<Expr> args);
Expr op_or(std::vector<Expr> args);
Expr eq(Expr a, Expr b);
Expr neq(Expr a, Expr b);
Expr lt(Expr a, Expr b);
Expr ge(Expr a, Expr b);
Expr add(Expr a, Expr b);
Expr count(std::vector<Expr> args);
Expr case_of(std::vector<std::pair<Expr, Expr>> branches, Expr otherwise);
Expr choice(std::vector<Expr> values);
/// Same expression with every reference moved to the next step.
Expr with_next(const Expr& e);

enum class Scope { Node, Main, Blackboard };

enum class DeclKind {
  State,   // init/next assignments
  Chain,   // variable equal to `expr` at every step: init(x) := E; next(x) := next(E)
  Define,  // macro
};

struct Symbol {
  std::string name;
  Scope scope = Scope::Node;
  std::optional<NodeId> owner;
  Sort sort;
  DeclKind kind = DeclKind::Define;
  Expr init;  // State
  Expr next;  // State
  Expr expr;  // Chain, Define
};

enum class Family { Leaf, TotalV2, TotalV3, Btc };

std::string family_name(Family f);

struct Plan {
  Family family = Family::Leaf;
  std::vector<Symbol> symbols;
  std::vector<std::optional<SymbolId>> status;  // per node
  std::vector<std::optional<SymbolId>> skip;    // per node
  std::vector<std::optional<SymbolId>> active;  // per node: Total `active`, BTC `enable`
  std::vector<SymbolId> blackboard;             // per variable
  std::optional<SymbolId> active_node;          // Leaf cursor, -1 between ticks

  SymbolId add(Symbol s);
  const Symbol& operator[](SymbolId id) const { return symbols[id]; }
  std::optional<SymbolId> find(std::optional<NodeId> owner, std::string_view name) const;
};

/// Builds the plan of an encoding. Btc requires a compatible tree.
Plan build(const Tree& tree, Family family);

/// Longest chain of Defines: 1 + deepest Define referenced; variables count 0.
int define_depth(const Plan& plan);

/// Executes a plan step by step.
class Runner {
 public:
  Runner(const Tree& tree, const Plan& plan);

  /// Computes the next step (the first call computes the initial step).
  void step(LeafOracle& oracle, int tick);

  int value(SymbolId s) const { return cur_[s]; }
  int steps() const { return steps_; }
  /// Values of State symbols, used to detect revisited states.
  std::string key() const;

 private:
  int eval_symbol(SymbolId s);
  int eval(const Expr& e, bool transition);

  const Tree* tree_;
  const Plan* plan_;
  std::vector<int> prev_;
  std::vector<int> cur_;
  std::vector<std::uint8_t> mark_;
  LeafOracle* oracle_ = nullptr;
  int tick_ = 0;
  int ordinal_ = 0;
  int steps_ = 0;
};

}  // namespace btv::plan
