#include <functional>
#include <map>
#include <span>

#include "btv/btc_encoding.hpp"
#include "btv/error.hpp"
#include "btv/plan.hpp"

namespace btv::plan {

namespace {

Expr is_status(Expr e, Status s) { return eq(std::move(e), lit(s)); }
Expr resolved(const Expr& e) {
  return op_or({is_status(e, Status::Success), is_status(e, Status::Failure)});
}

Expr status_choice(const Tree& tree, NodeId leaf) {
  std::vector<Expr> values;
  for (Status s : tree.leaf_of(leaf).profile.status_domain.members()) values.push_back(lit(s));
  Expr c = choice(std::move(values));
  c.leaf = leaf;
  return c;
}

Expr apply_map(const StatusMap& m, const Expr& child) {
  if (m == StatusMap{}) return child;
  return case_of({{is_status(child, Status::Success), lit(m.to[0])},
                  {is_status(child, Status::Failure), lit(m.to[1])},
                  {is_status(child, Status::Running), lit(m.to[2])}},
                 lit(Status::Invalid));
}

Expr effect_value(const Tree& tree, NodeId leaf, std::size_t index, const Expr& status) {
  const BlackboardEffect& e = tree.leaf_of(leaf).profile.effects[index];
  const Domain& dom = tree.blackboard()[*tree.find_variable(e.variable)].domain;
  if (const auto* c = std::get_if<SetConstant>(&e.update)) return lit_value(dom, c->value);
  if (const auto* m = std::get_if<SetFromStatus>(&e.update))
    return case_of({{is_status(status, Status::Success), lit_value(dom, m->values[0])},
                    {is_status(status, Status::Failure), lit_value(dom, m->values[1])}},
                   lit_value(dom, m->values[2]));
  std::vector<Expr> values;
  for (int i = 0; i < domain_size(dom); ++i) values.push_back(lit_value(dom, domain_value(dom, i)));
  Expr c = choice(std::move(values));
  c.leaf = leaf;
  c.effect = index;
  return c;
}

Expr effect_fires(const BlackboardEffect& e, const Expr& status) {
  if (std::holds_alternative<OnTick>(e.trigger)) return lit(true);
  return is_status(status, std::get<OnStatus>(e.trigger).status);
}

/// Shared bookkeeping for every family.
class Builder {
 public:
  Builder(const Tree& tree, Family family) : tree_(tree) {
    plan_.family = family;
    plan_.status.resize(tree.size());
    plan_.skip.resize(tree.size());
    plan_.active.resize(tree.size());
  }

 protected:
  SymbolId node_symbol(NodeId n, std::string name, Sort sort, DeclKind kind) {
    Symbol s;
    s.name = std::move(name);
    s.owner = n;
    s.sort = std::move(sort);
    s.kind = kind;
    return plan_.add(std::move(s));
  }

  Symbol& sym(SymbolId id) { return plan_.symbols[id]; }

  Expr status(NodeId n) const { return ref(*plan_.status[n.index()]); }
  Expr skip(NodeId n) const {
    const auto s = plan_.skip[n.index()];
    return s ? ref(*s) : lit(false);
  }
  Expr stored(NodeId n) const { return ref(*plan_.find(n, "stored")); }

  bool has_skip(NodeId c) const {
    const auto p = tree_.parent(c);
    return p && (tree_.is_oneshot(*p) || tree_.is_memory_composite(*p) ||
                 tree_.is_synchronized_parallel(*p));
  }

  // Declares skip and stored state symbols; expressions are filled in later.
  void declare_memory() {
    for (const Node& node : tree_.nodes()) {
      if (tree_.is_oneshot(node.id)) {
        const SymbolId s = node_symbol(node.id, "stored", Sort::status(), DeclKind::State);
        sym(s).init = lit(Status::Invalid);
      }
      if (has_skip(node.id)) {
        const SymbolId s = node_symbol(node.id, "skip", Sort::boolean(), DeclKind::State);
        sym(s).init = lit(false);
        plan_.skip[node.id.index()] = s;
      }
    }
  }

  // stored and skip updates, read from the current statuses.
  void define_memory_updates(const std::function<Expr(NodeId)>& anc_resolved) {
    for (const Node& node : tree_.nodes()) {
      if (!tree_.is_oneshot(node.id)) continue;
      const SymbolId s = *plan_.find(node.id, "stored");
      const Expr cs = status(node.children.front());
      sym(s).next = case_of({{op_and({is_status(ref(s), Status::Invalid), resolved(cs)}), cs}}, ref(s));
    }
    for (const Node& node : tree_.nodes()) {
      if (!has_skip(node.id)) continue;
      const NodeId p = *node.parent;
      const SymbolId s = *plan_.skip[node.id.index()];
      if (tree_.is_oneshot(p)) {
        sym(s).next = neq(next_ref(*plan_.find(p, "stored")), lit(Status::Invalid));
        continue;
      }
      Expr set;
      if (tree_.is_synchronized_parallel(p)) {
        set = is_status(status(node.id), Status::Success);
      } else {
        std::vector<Expr> running;
        for (auto r = tree_.right_neighbor(node.id); r; r = tree_.right_neighbor(*r))
          running.push_back(is_status(status(*r), Status::Running));
        set = op_or(std::move(running));
      }
      sym(s).next = case_of({{anc_resolved(node.id), lit(false)}, {set, lit(true)}}, ref(s));
    }
  }

  void declare_blackboard() {
    for (const auto& decl : tree_.blackboard()) {
      Symbol s;
      s.name = decl.name;
      s.scope = Scope::Blackboard;
      if (std::holds_alternative<BoolDomain>(decl.domain)) {
        s.sort = Sort::boolean();
      } else if (const auto* r = std::get_if<IntRange>(&decl.domain)) {
        s.sort = Sort::range(r->lo, r->hi);
      } else {
        s.sort = Sort::enumeration(std::get<EnumDomain>(decl.domain).labels);
      }
      s.kind = DeclKind::State;
      s.init = lit_value(decl.domain, decl.initial);
      plan_.blackboard.push_back(plan_.add(std::move(s)));
    }
  }

  // Value of each variable after the effects of `writers` (in execution
  // order) fire on top of `base`. `runs(leaf)` tells whether a leaf executed.
  Expr blackboard_update(std::size_t var, const std::vector<NodeId>& writers,
                         const std::function<Expr(NodeId)>& runs,
                         const std::function<Expr(NodeId)>& leaf_status, Expr base) {
    const std::string& name = tree_.blackboard()[var].name;
    std::vector<std::pair<Expr, Expr>> branches;
    for (auto it = writers.rbegin(); it != writers.rend(); ++it) {
      const auto& effects = tree_.leaf_of(*it).profile.effects;
      for (std::size_t e = effects.size(); e-- > 0;) {
        if (effects[e].variable != name) continue;
        const Expr st = leaf_status(*it);
        branches.emplace_back(op_and({runs(*it), effect_fires(effects[e], st)}),
                              effect_value(tree_, *it, e, st));
      }
    }
    return case_of(std::move(branches), std::move(base));
  }

  const Tree& tree_;
  Plan plan_;
};

// ---------------------------------------------------------------------------
// Leaf encoding
// ---------------------------------------------------------------------------

class LeafBuilder : public Builder {
 public:
  explicit LeafBuilder(const Tree& tree) : Builder(tree, Family::Leaf) {}

  Plan run() {
    Symbol cursor;
    cursor.name = "active_node";
    cursor.scope = Scope::Main;
    cursor.sort = Sort::range(-1, static_cast<int>(tree_.size()) - 1);
    cursor.kind = DeclKind::State;
    cursor.init = lit_int(-1);
    cursor_ = plan_.add(std::move(cursor));
    plan_.active_node = cursor_;

    declare_memory();
    for (const Node& node : tree_.nodes()) {
      if (!tree_.is_parallel(node.id)) continue;
      const int k = static_cast<int>(node.children.size());
      const SymbolId sc = node_symbol(node.id, "sc_base", Sort::range(0, k), DeclKind::State);
      sym(sc).init = lit_int(0);
      const SymbolId ff = node_symbol(node.id, "ff_base", Sort::boolean(), DeclKind::State);
      sym(ff).init = lit(false);
    }
    declare_blackboard();

    // Statuses, children before parents so expressions can refer to them.
    for (const Node& node : tree_.nodes()) {
      const bool leaf = tree_.is_leaf(node.id);
      plan_.status[node.id.index()] = node_symbol(
          node.id, "status", Sort::status(), leaf ? DeclKind::Chain : DeclKind::Define);
    }
    for (const Node& node : tree_.nodes()) sym(*plan_.status[node.id.index()]).expr = status_expr(node.id);

    for (const Node& node : tree_.nodes()) {
      if (node.parent) anc_resolved(node.id);
      if (tree_.is_parallel(node.id)) in_progress(node.id);
    }
    define_memory_updates([&](NodeId n) { return ref(anc_resolved(n)); });
    define_parallel_bases();

    for (const Node& node : tree_.nodes()) enter(node.id);
    std::vector<std::pair<Expr, Expr>> moves;
    moves.emplace_back(eq(ref(cursor_), lit_int(-1)), ref(enter(tree_.root())));
    for (const Node& node : tree_.nodes()) {
      if (!cursor_target(node.id)) continue;
      moves.emplace_back(eq(ref(cursor_), lit_node(node.id)), up_of(node.id));
    }
    sym(cursor_).next = case_of(std::move(moves), lit_int(-1));

    const std::vector<NodeId> leaves = tree_.leaves();
    for (std::size_t v = 0; v < plan_.blackboard.size(); ++v) {
      const SymbolId s = plan_.blackboard[v];
      sym(s).next = blackboard_update(
          v, leaves, [&](NodeId l) { return eq(ref(cursor_), lit_node(l)); },
          [&](NodeId l) { return status(l); }, ref(s));
    }
    return std::move(plan_);
  }

 private:
  bool cursor_target(NodeId n) const { return tree_.is_leaf(n) || tree_.is_oneshot(n); }
  Expr at(NodeId n) const { return eq(ref(cursor_), lit_node(n)); }

  Expr status_expr(NodeId n) {
    if (tree_.is_leaf(n))
      return case_of({{at(n), status_choice(tree_, n)}}, lit(Status::Invalid));
    const auto children = tree_.children(n);
    if (tree_.is_selector(n) || tree_.is_sequence(n)) {
      const Status keep = tree_.is_selector(n) ? Status::Failure : Status::Success;
      std::vector<std::pair<Expr, Expr>> branches;
      for (NodeId c : children)
        branches.emplace_back(op_and({neq(status(c), lit(Status::Invalid)), neq(status(c), lit(keep))}),
                              status(c));
      branches.emplace_back(is_status(status(children.back()), keep), lit(keep));
      return case_of(std::move(branches), lit(Status::Invalid));
    }
    if (tree_.is_parallel(n)) {
      std::vector<Expr> done;
      for (std::size_t i = 0; i < children.size(); ++i) {
        std::vector<Expr> rest{neq(status(children[i]), lit(Status::Invalid))};
        for (std::size_t j = i + 1; j < children.size(); ++j) rest.push_back(skip(children[j]));
        done.push_back(op_and(std::move(rest)));
      }
      std::vector<Expr> failures{ref(*plan_.find(n, "ff_base"))};
      std::vector<Expr> successes;
      for (NodeId c : children) {
        failures.push_back(is_status(status(c), Status::Failure));
        successes.push_back(is_status(status(c), Status::Success));
      }
      const int m = tree_.parallel_of(n).policy.threshold;
      const SymbolId sc = *plan_.find(n, "sc_base");
      Expr enough = ge(add(ref(sc), count(std::move(successes))), lit_int(m));
      return case_of({{op_not(op_or(std::move(done))), lit(Status::Invalid)},
                      {op_or(std::move(failures)), lit(Status::Failure)},
                      {std::move(enough), lit(Status::Success)}},
                     lit(Status::Running));
    }
    const NodeId child = children.front();
    if (tree_.is_oneshot(n)) return case_of({{at(n), stored(n)}}, status(child));
    return apply_map(std::get<StatusMap>(tree_.decorator_of(n).kind), status(child));
  }

  SymbolId anc_resolved(NodeId n) {
    if (auto s = plan_.find(n, "anc_resolved")) return *s;
    const NodeId p = *tree_.parent(n);
    Expr e = resolved(status(p));
    if (tree_.parent(p)) e = op_or({ref(anc_resolved(p)), std::move(e)});
    const SymbolId s = node_symbol(n, "anc_resolved", Sort::boolean(), DeclKind::Define);
    sym(s).expr = std::move(e);
    return s;
  }

  SymbolId in_progress(NodeId p) {
    if (auto s = plan_.find(p, "in_progress")) return *s;
    std::vector<Expr> below;
    for (std::uint32_t i = p.value + 1; i < tree_.node(p).subtree_end.value; ++i)
      if (cursor_target(NodeId{i})) below.push_back(at(NodeId{i}));
    const SymbolId s = node_symbol(p, "in_progress", Sort::boolean(), DeclKind::Define);
    sym(s).expr = op_or(std::move(below));
    return s;
  }

  void define_parallel_bases() {
    for (const Node& node : tree_.nodes()) {
      if (!tree_.is_parallel(node.id)) continue;
      const NodeId n = node.id;
      const SymbolId sc = *plan_.find(n, "sc_base");
      const SymbolId ff = *plan_.find(n, "ff_base");
      Expr reset = resolved(status(n));
      if (node.parent) reset = op_or({ref(anc_resolved(n)), std::move(reset)});
      std::vector<Expr> successes;
      std::vector<Expr> failures{ref(ff)};
      std::vector<Expr> skipped;
      for (NodeId c : node.children) {
        successes.push_back(is_status(status(c), Status::Success));
        failures.push_back(is_status(status(c), Status::Failure));
        skipped.push_back(skip(c));
      }
      Expr progressed = add(ref(sc), count(std::move(successes)));
      Expr fresh = count(std::move(skipped));
      sym(sc).next = case_of({{reset, lit_int(0)}, {ref(in_progress(n)), std::move(progressed)}},
                             std::move(fresh));
      sym(ff).next = case_of({{reset, lit(false)}, {ref(in_progress(n)), op_or(std::move(failures))}},
                             lit(false));
    }
  }

  // NextNode entering n from its parent.
  SymbolId enter(NodeId n) {
    if (auto s = plan_.find(n, "nn_enter")) return *s;
    const SymbolId s = node_symbol(n, "nn_enter", sym(cursor_).sort, DeclKind::Define);
    Expr inner;
    if (tree_.is_leaf(n)) {
      inner = lit_node(n);
    } else if (tree_.is_decorator(n)) {
      const NodeId child = tree_.children(n).front();
      inner = ref(enter(child));
      if (tree_.is_oneshot(n))
        inner = case_of({{neq(stored(n), lit(Status::Invalid)), lit_node(n)}},
                        std::move(inner));
    } else {
      inner = first_unskipped(tree_.children(n));
    }
    sym(s).expr = case_of({{neq(status(n), lit(Status::Invalid)), up_of(n)}}, std::move(inner));
    return s;
  }

  Expr first_unskipped(std::span<const NodeId> candidates) {
    std::vector<std::pair<Expr, Expr>> branches;
    for (NodeId c : candidates) branches.emplace_back(op_not(skip(c)), ref(enter(c)));
    return case_of(std::move(branches), lit_int(-1));
  }

  // NextNode of the parent of c coming back from c.
  Expr up_of(NodeId c) {
    const auto p = tree_.parent(c);
    if (!p) return lit_int(-1);
    return ref(up(c));
  }

  SymbolId up(NodeId c) {
    if (auto s = plan_.find(c, "nn_up")) return *s;
    const SymbolId s = node_symbol(c, "nn_up", sym(cursor_).sort, DeclKind::Define);
    const NodeId p = *tree_.parent(c);
    Expr inner;
    if (tree_.is_parallel(p)) {
      const auto siblings = tree_.children(p);
      inner = first_unskipped(siblings.subspan(tree_.node(c).child_index + 1));
    } else if (tree_.is_decorator(p)) {
      inner = lit_int(-1);
    } else if (const auto r = tree_.right_neighbor(c)) {
      inner = ref(enter(*r));
    } else {
      inner = lit_int(-1);
    }
    sym(s).expr = case_of({{neq(status(p), lit(Status::Invalid)), up_of(p)}}, std::move(inner));
    return s;
  }

  SymbolId cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Total encoding
// ---------------------------------------------------------------------------

class TotalBuilder : public Builder {
 public:
  TotalBuilder(const Tree& tree, Family family) : Builder(tree, family) {}

  Plan run() {
    const bool v3 = plan_.family == Family::TotalV3;
    const DeclKind derived = v3 ? DeclKind::Chain : DeclKind::Define;
    declare_memory();
    declare_blackboard();
    for (const Node& node : tree_.nodes()) {
      plan_.active[node.id.index()] = node_symbol(node.id, "active", Sort::boolean(), derived);
      plan_.status[node.id.index()] = node_symbol(
          node.id, "status", Sort::status(), tree_.is_leaf(node.id) ? DeclKind::Chain : derived);
    }
    for (const Node& node : tree_.nodes()) {
      if (!node.parent) continue;
      const SymbolId s = node_symbol(node.id, "anc_resolved", Sort::boolean(), derived);
      const NodeId p = *node.parent;
      Expr e = resolved(status(p));
      if (tree_.parent(p)) e = op_or({ref(*plan_.find(p, "anc_resolved")), std::move(e)});
      sym(s).expr = std::move(e);
    }
    for (const Node& node : tree_.nodes()) {
      sym(*plan_.active[node.id.index()]).expr = active_expr(node.id);
      sym(*plan_.status[node.id.index()]).expr = status_expr(node.id);
    }
    define_memory_updates([&](NodeId n) { return ref(*plan_.find(n, "anc_resolved")); });

    std::vector<NodeId> leaves = tree_.leaves();
    for (std::size_t v = 0; v < plan_.blackboard.size(); ++v) {
      const SymbolId s = plan_.blackboard[v];
      const auto runs = [&](NodeId l) { return active(l); };
      const auto st = [&](NodeId l) { return status(l); };
      const Expr now = blackboard_update(v, leaves, runs, st, sym(s).init);
      sym(s).init = now;
      sym(s).next = with_next_except(blackboard_update(v, leaves, runs, st, ref(s)), s);
    }
    return std::move(plan_);
  }

 private:
  Expr active(NodeId n) const { return ref(*plan_.active[n.index()]); }

  // Moves references to the next step, keeping the variable's own value.
  static Expr with_next_except(const Expr& e, SymbolId keep) {
    Expr out = e;
    if (out.op == Expr::Op::Ref && out.symbol != keep) out.next = true;
    for (auto& a : out.args) a = with_next_except(a, keep);
    return out;
  }

  Expr active_expr(NodeId n) {
    const auto p = tree_.parent(n);
    if (!p) return lit(true);
    std::vector<Expr> terms{active(*p), op_not(skip(n))};
    const auto left = tree_.left_neighbor(n);
    if (left) {
      Expr step = lit(true);
      if (tree_.is_selector(*p)) step = is_status(status(*left), Status::Failure);
      if (tree_.is_sequence(*p)) step = is_status(status(*left), Status::Success);
      if (tree_.is_memory_composite(*p)) step = op_or({skip(*left), std::move(step)});
      terms.push_back(std::move(step));
    }
    return op_and(std::move(terms));
  }

  Expr status_expr(NodeId n) {
    const Expr inactive = op_not(active(n));
    if (tree_.is_leaf(n)) return case_of({{active(n), status_choice(tree_, n)}}, lit(Status::Invalid));
    const auto children = tree_.children(n);
    if (tree_.is_selector(n) || tree_.is_sequence(n)) {
      const Status stop = tree_.is_selector(n) ? Status::Success : Status::Failure;
      const Status pass = tree_.is_selector(n) ? Status::Failure : Status::Success;
      std::vector<std::pair<Expr, Expr>> branches{{inactive, lit(Status::Invalid)}};
      for (NodeId c : children)
        branches.emplace_back(op_or({is_status(status(c), stop), is_status(status(c), Status::Running)}),
                              status(c));
      return case_of(std::move(branches), lit(pass));
    }
    if (tree_.is_parallel(n)) {
      std::vector<Expr> failures;
      std::vector<Expr> successes;
      for (NodeId c : children) {
        failures.push_back(is_status(status(c), Status::Failure));
        successes.push_back(op_or({is_status(status(c), Status::Success), skip(c)}));
      }
      const SymbolId count_sym = node_symbol(
          n, "success_count", Sort::range(0, static_cast<int>(children.size())), DeclKind::Define);
      sym(count_sym).expr = count(std::move(successes));
      const int m = tree_.parallel_of(n).policy.threshold;
      return case_of({{inactive, lit(Status::Invalid)},
                      {op_or(std::move(failures)), lit(Status::Failure)},
                      {ge(ref(count_sym), lit_int(m)), lit(Status::Success)}},
                     lit(Status::Running));
    }
    const NodeId child = children.front();
    if (tree_.is_oneshot(n))
      return case_of({{inactive, lit(Status::Invalid)},
                      {neq(stored(n), lit(Status::Invalid)), stored(n)}},
                     status(child));
    return case_of({{inactive, lit(Status::Invalid)}},
                   apply_map(std::get<StatusMap>(tree_.decorator_of(n).kind), status(child)));
  }
};

// ---------------------------------------------------------------------------
// BTC encoding
// ---------------------------------------------------------------------------

class BtcBuilder : public Builder {
 public:
  explicit BtcBuilder(const Tree& tree) : Builder(tree, Family::Btc) {}

  Plan run() {
    btc::require_compatible(tree_);
    for (const Node& node : tree_.nodes()) {
      if (tree_.is_oneshot(node.id)) {
        const SymbolId s = node_symbol(node.id, "stored", Sort::status(), DeclKind::State);
        sym(s).init = lit(Status::Invalid);
      }
      const auto p = node.parent;
      if (p && node.child_index == 0 && tree_.is_memory_composite(*p)) {
        const char* name = tree_.is_selector(*p) ? "prior_failure" : "prior_success";
        const SymbolId s = node_symbol(node.id, name, Sort::boolean(), DeclKind::State);
        sym(s).init = lit(false);
      }
    }
    for (const Node& node : tree_.nodes()) {
      const bool root = !node.parent;
      plan_.active[node.id.index()] =
          node_symbol(node.id, "enable", Sort::boolean(), root ? DeclKind::State : DeclKind::Define);
      plan_.status[node.id.index()] = node_symbol(
          node.id, "status", Sort::status(), tree_.is_leaf(node.id) ? DeclKind::Chain : DeclKind::Define);
      if (tree_.is_memory_composite(node.id)) {
        const NodeId c1 = node.children.front();
        const SymbolId r = node_symbol(node.id, "resume", Sort::boolean(), DeclKind::Define);
        sym(r).expr = ref(*plan_.find(c1, tree_.is_selector(node.id) ? "prior_failure" : "prior_success"));
      }
    }
    const SymbolId root_enable = *plan_.active[0];
    sym(root_enable).init = lit(true);
    sym(root_enable).next = neq(status(tree_.root()), lit(Status::Invalid));
    for (const Node& node : tree_.nodes()) {
      if (node.parent) sym(*plan_.active[node.id.index()]).expr = enable_expr(node.id);
      sym(*plan_.status[node.id.index()]).expr = status_expr(node.id);
    }
    for (const Node& node : tree_.nodes()) {
      if (tree_.is_oneshot(node.id)) {
        const SymbolId s = *plan_.find(node.id, "stored");
        const Expr cs = status(node.children.front());
        sym(s).next =
            case_of({{op_and({is_status(ref(s), Status::Invalid), resolved(cs)}), cs}}, ref(s));
      }
      for (const char* name : {"prior_success", "prior_failure"}) {
        const auto s = plan_.find(node.id, name);
        if (!s) continue;
        const NodeId last = *tree_.last_child(*node.parent);
        const Status flag = std::string_view(name) == "prior_success" ? Status::Success : Status::Failure;
        sym(*s).next = case_of({{resolved(status(last)), lit(false)},
                                {is_status(status(node.id), flag), lit(true)}},
                               ref(*s));
      }
    }
    return std::move(plan_);
  }

 private:
  Expr enable(NodeId n) const { return ref(*plan_.active[n.index()]); }

  Expr enable_expr(NodeId n) {
    const NodeId p = *tree_.parent(n);
    const bool first = tree_.node(n).child_index == 0;
    if (tree_.is_decorator(p)) {
      if (tree_.is_oneshot(p)) return op_and({enable(p), is_status(stored(p), Status::Invalid)});
      return enable(p);
    }
    const NodeId c1 = tree_.children(p)[0];
    if (tree_.is_parallel(p)) return first ? enable(p) : neq(status(c1), lit(Status::Invalid));
    const Status pass = tree_.is_selector(p) ? Status::Failure : Status::Success;
    const auto resume = plan_.find(p, "resume");
    if (first) return resume ? op_and({enable(p), op_not(ref(*resume))}) : enable(p);
    Expr advance = is_status(status(c1), pass);
    if (resume) advance = op_or({std::move(advance), op_and({ref(*resume), enable(p)})});
    return advance;
  }

  Expr status_expr(NodeId n) {
    if (tree_.is_leaf(n)) return case_of({{enable(n), status_choice(tree_, n)}}, lit(Status::Invalid));
    const auto children = tree_.children(n);
    if (tree_.is_selector(n) || tree_.is_sequence(n)) {
      const Status stop = tree_.is_selector(n) ? Status::Success : Status::Failure;
      const Expr s1 = status(children[0]);
      return case_of({{op_or({is_status(s1, Status::Running), is_status(s1, stop)}), s1}},
                     status(children[1]));
    }
    if (tree_.is_parallel(n)) {
      const Expr s1 = status(children[0]);
      const Expr s2 = status(children[1]);
      const int m = tree_.parallel_of(n).policy.threshold;
      const Expr successes = count({is_status(s1, Status::Success), is_status(s2, Status::Success)});
      const Expr live = count({op_or({is_status(s1, Status::Success), is_status(s1, Status::Running)}),
                               op_or({is_status(s2, Status::Success), is_status(s2, Status::Running)})});
      return case_of({{is_status(s1, Status::Invalid), lit(Status::Invalid)},
                      {ge(successes, lit_int(m)), lit(Status::Success)},
                      {lt(live, lit_int(m)), lit(Status::Failure)}},
                     lit(Status::Running));
    }
    const NodeId child = children.front();
    if (tree_.is_oneshot(n))
      return case_of({{op_not(enable(n)), lit(Status::Invalid)},
                      {neq(stored(n), lit(Status::Invalid)), stored(n)}},
                     status(child));
    return apply_map(std::get<StatusMap>(tree_.decorator_of(n).kind), status(child));
  }
};

}  // namespace

Plan build(const Tree& tree, Family family) {
  switch (family) {
    case Family::Leaf: return LeafBuilder(tree).run();
    case Family::TotalV2:
    case Family::TotalV3: return TotalBuilder(tree, family).run();
    case Family::Btc: return BtcBuilder(tree).run();
  }
  throw Error("unknown plan family");
}

}  // namespace btv::plan
