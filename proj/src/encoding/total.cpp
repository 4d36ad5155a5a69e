#include "btv/total_encoding.hpp"

#include "btv/error.hpp"

namespace btv::total {

TotalState TotalState::initial(const Tree& tree) {
  TotalState s;
  s.skip.assign(tree.size(), false);
  s.stored.assign(tree.size(), Status::Invalid);
  s.blackboard = initial_blackboard(tree);
  return s;
}

std::string TotalState::key() const {
  std::string k;
  for (std::size_t i = 0; i < skip.size(); ++i)
    k.push_back(static_cast<char>(skip[i] | (static_cast<int>(stored[i]) << 1)));
  for (int v : blackboard) k.append(reinterpret_cast<const char*>(&v), sizeof v);
  return k;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Tree& tree, TotalState& state, LeafOracle& oracle)
      : tree_(tree), state_(state), oracle_(oracle) {
    const std::size_t n = tree.size();
    r_.active.assign(n, false);
    r_.status.assign(n, Status::Invalid);
    r_.skipped = state.skip;
    r_.resume.assign(n, false);
    r_.success_count.assign(n, 0);
  }

  TotalTickResult run() {
    r_.active[0] = true;
    eval(tree_.root());
    advance();
    return std::move(r_);
  }

 private:
  bool skipped(NodeId n) const { return state_.skip[n.index()]; }

  // Whether child i of an active parent p is active.
  bool child_active(NodeId p, std::size_t i) {
    const NodeId c = tree_.children(p)[i];
    if (skipped(c)) return false;
    if (i == 0) return true;
    const NodeId left = tree_.children(p)[i - 1];
    if (tree_.is_memory_composite(p) && skipped(left)) {
      r_.resume[c.index()] = true;
      return true;
    }
    const Status ls = r_.status[left.index()];
    if (tree_.is_selector(p)) return ls == Status::Failure;
    if (tree_.is_sequence(p)) return ls == Status::Success;
    return tree_.is_parallel(p);
  }

  Status eval(NodeId n) {
    const auto children = tree_.children(n);
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (!child_active(n, i)) continue;
      r_.active[children[i].index()] = true;
      eval(children[i]);
    }
    const Status s = std::visit([&](const auto& k) { return status_of(n, k); }, tree_.kind(n));
    r_.status[n.index()] = s;
    return s;
  }

  Status status_of(NodeId n, const Leaf& leaf) {
    const StatusSet domain = leaf.profile.status_domain;
    const Status s =
        oracle_.leaf_status(state_.tick, static_cast<int>(r_.executed.size()), n, domain);
    if (!domain.contains(s))
      throw OracleError("oracle returned a status outside the domain of leaf '" +
                        tree_.name(n) + "'");
    r_.executed.push_back(n);
    apply_effects(tree_, n, s, state_.blackboard, [&](std::size_t effect, int size) {
      return oracle_.choose_value(state_.tick, n, effect, size);
    });
    return s;
  }

  Status first_child_with(NodeId n, Status a, Status b, Status otherwise) const {
    for (NodeId c : tree_.children(n)) {
      const Status cs = r_.status[c.index()];
      if (cs == a || cs == b) return cs;
    }
    return otherwise;
  }

  Status status_of(NodeId n, const Selector&) const {
    return first_child_with(n, Status::Success, Status::Running, Status::Failure);
  }

  Status status_of(NodeId n, const Sequence&) const {
    return first_child_with(n, Status::Failure, Status::Running, Status::Success);
  }

  Status status_of(NodeId n, const Parallel& par) {
    int count = 0;
    bool failed = false;
    for (NodeId c : tree_.children(n)) {
      const Status cs = r_.status[c.index()];
      count += cs == Status::Success || skipped(c);
      failed = failed || cs == Status::Failure;
    }
    r_.success_count[n.index()] = count;
    if (failed) return Status::Failure;
    return count >= par.policy.threshold ? Status::Success : Status::Running;
  }

  Status status_of(NodeId n, const Decorator& dec) const {
    const NodeId child = tree_.children(n).front();
    if (const auto* map = std::get_if<StatusMap>(&dec.kind))
      return map->apply(r_.status[child.index()]);
    const Status stored = state_.stored[n.index()];
    return stored != Status::Invalid ? stored : r_.status[child.index()];
  }

  void advance() {
    const std::size_t n_nodes = tree_.size();
    std::vector<bool> anc_resolved(n_nodes, false);
    for (const Node& node : tree_.nodes()) {
      if (!node.parent) continue;
      const std::size_t p = node.parent->index();
      anc_resolved[node.id.index()] = anc_resolved[p] || is_resolved(r_.status[p]);
    }
    for (const Node& node : tree_.nodes()) {
      if (!tree_.is_oneshot(node.id)) continue;
      Status& stored = state_.stored[node.id.index()];
      const Status cs = r_.status[node.children.front().index()];
      if (stored == Status::Invalid && is_resolved(cs)) stored = cs;
    }
    std::vector<bool> next(n_nodes, false);
    for (const Node& node : tree_.nodes()) {
      if (!node.parent) continue;
      const NodeId p = *node.parent;
      const std::size_t i = node.id.index();
      if (tree_.is_oneshot(p)) {
        next[i] = state_.stored[p.index()] != Status::Invalid;
        continue;
      }
      if (!tree_.is_memory_composite(p) && !tree_.is_synchronized_parallel(p)) continue;
      bool set = false;
      if (tree_.is_synchronized_parallel(p)) {
        set = r_.status[i] == Status::Success;
      } else {
        for (auto r = tree_.right_neighbor(node.id); r && !set; r = tree_.right_neighbor(*r))
          set = r_.status[r->index()] == Status::Running;
      }
      next[i] = anc_resolved[i] ? false : set ? true : state_.skip[i];
    }
    state_.skip = std::move(next);
    ++state_.tick;
  }

  const Tree& tree_;
  TotalState& state_;
  LeafOracle& oracle_;
  TotalTickResult r_;
};

}  // namespace

TotalTickResult compute_tick(const Tree& tree, TotalState& state, LeafOracle& oracle) {
  if (state.skip.size() != tree.size()) throw Error("total state does not belong to this tree");
  return Evaluator(tree, state, oracle).run();
}

TickTrace to_trace(const TotalTickResult& result, const TotalState& after) {
  return TickTrace{result.status, result.executed, result.skipped, after.blackboard};
}

TickTrace run_tick(const Tree& tree, TotalState& state, LeafOracle& oracle) {
  const TotalTickResult r = compute_tick(tree, state, oracle);
  return to_trace(r, state);
}

}  // namespace btv::total
