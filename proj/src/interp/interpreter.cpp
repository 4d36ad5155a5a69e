#include "btv/interp.hpp"

#include <sstream>

#include "btv/error.hpp"

namespace btv::interp {

std::string flavor_name(SemanticsFlavor flavor) {
  return flavor == SemanticsFlavor::PyTrees ? "pytrees" : "btc";
}

InterpState InterpState::initial(const Tree& tree) {
  InterpState s;
  s.resume.assign(tree.size(), 0);
  s.succeeded.assign(tree.size(), false);
  s.stored.assign(tree.size(), Status::Invalid);
  s.blackboard = initial_blackboard(tree);
  return s;
}

std::string InterpState::key() const {
  std::string k;
  k.reserve(resume.size() * 3 + blackboard.size() * 4);
  for (std::size_t i = 0; i < resume.size(); ++i) {
    k.push_back(static_cast<char>(resume[i]));
    k.push_back(static_cast<char>(succeeded[i]));
    k.push_back(static_cast<char>(stored[i]));
  }
  for (int v : blackboard) k.append(reinterpret_cast<const char*>(&v), sizeof v);
  return k;
}

std::vector<bool> skip_flags(const Tree& tree, const InterpState& state) {
  std::vector<bool> skip(tree.size(), false);
  for (const Node& node : tree.nodes()) {
    if (!node.parent) continue;
    const NodeId p = *node.parent;
    if (tree.is_memory_composite(p)) {
      skip[node.id.index()] = static_cast<int>(node.child_index) < state.resume[p.index()];
    } else if (tree.is_synchronized_parallel(p)) {
      skip[node.id.index()] = state.succeeded[node.id.index()];
    } else if (tree.is_oneshot(p)) {
      skip[node.id.index()] = state.stored[p.index()] != Status::Invalid;
    }
  }
  return skip;
}

namespace {

class Ticker {
 public:
  Ticker(const Tree& tree, InterpState& state, LeafOracle& oracle, SemanticsFlavor flavor)
      : tree_(tree), state_(state), oracle_(oracle), flavor_(flavor) {
    trace_.status.assign(tree.size(), Status::Invalid);
    trace_.skipped = skip_flags(tree, state);
  }

  TickTrace run() {
    exec(tree_.root());
    if (flavor_ == SemanticsFlavor::PyTrees) forget();
    trace_.blackboard = state_.blackboard;
    ++state_.tick;
    return std::move(trace_);
  }

 private:
  Status exec(NodeId n) {
    const Status s = std::visit([&](const auto& k) { return exec_kind(n, k); }, tree_.kind(n));
    trace_.status[n.index()] = s;
    return s;
  }

  Status exec_kind(NodeId n, const Leaf& leaf) {
    const int ordinal = static_cast<int>(trace_.executed.size());
    const Status s = oracle_.leaf_status(state_.tick, ordinal, n, leaf.profile.status_domain);
    if (!leaf.profile.status_domain.contains(s))
      throw OracleError("oracle returned " + std::string(1, status_letter(s)) + " for leaf '" +
                        tree_.name(n) + "' outside its status domain");
    trace_.executed.push_back(n);
    apply_effects(tree_, n, s, state_.blackboard, [&](std::size_t effect, int size) {
      return oracle_.choose_value(state_.tick, n, effect, size);
    });
    return s;
  }

  // Selector and sequence share everything except which status stops the scan.
  Status exec_ordered(NodeId n, bool memory, Status keep_going) {
    const auto children = tree_.children(n);
    const int start = memory ? state_.resume[n.index()] : 0;
    Status result = keep_going;
    int stopped_at = -1;
    for (int i = start; i < static_cast<int>(children.size()); ++i) {
      const Status s = exec(children[i]);
      if (s != keep_going) {
        result = s;
        stopped_at = i;
        break;
      }
    }
    if (memory) state_.resume[n.index()] = result == Status::Running ? stopped_at : 0;
    return result;
  }

  Status exec_kind(NodeId n, const Selector& sel) {
    return exec_ordered(n, sel.memory, Status::Failure);
  }

  Status exec_kind(NodeId n, const Sequence& seq) {
    return exec_ordered(n, seq.memory, Status::Success);
  }

  Status exec_kind(NodeId n, const Parallel& par) {
    if (par.synchronized && flavor_ == SemanticsFlavor::BtCompiler)
      throw UnsupportedError("parallel '" + tree_.name(n) +
                             "' is synchronized; BtCompiler semantics has no parallel memory");
    int successes = 0;
    int runnings = 0;
    bool failed = false;
    for (NodeId c : tree_.children(n)) {
      if (par.synchronized && state_.succeeded[c.index()]) {
        ++successes;
        continue;
      }
      const Status s = exec(c);
      successes += s == Status::Success;
      runnings += s == Status::Running;
      failed = failed || s == Status::Failure;
    }
    const int m = par.policy.threshold;
    Status result;
    if (flavor_ == SemanticsFlavor::PyTrees) {
      result = failed ? Status::Failure : successes >= m ? Status::Success : Status::Running;
    } else {
      result = successes >= m              ? Status::Success
               : m > successes + runnings ? Status::Failure
                                           : Status::Running;
    }
    if (par.synchronized) {
      for (NodeId c : tree_.children(n)) {
        if (result == Status::Running) {
          if (trace_.status[c.index()] == Status::Success) state_.succeeded[c.index()] = true;
        } else {
          state_.succeeded[c.index()] = false;
        }
      }
    }
    return result;
  }

  Status exec_kind(NodeId n, const Decorator& dec) {
    const NodeId child = tree_.children(n).front();
    if (const auto* map = std::get_if<StatusMap>(&dec.kind)) return map->apply(exec(child));
    Status& stored = state_.stored[n.index()];
    if (stored != Status::Invalid) return stored;
    const Status s = exec(child);
    if (is_resolved(s)) stored = s;
    return s;
  }

  // Memory below a node that returned S/F is dropped, the node's own included.
  void forget() {
    std::vector<bool> below(tree_.size(), false);
    for (const Node& node : tree_.nodes()) {
      const std::size_t i = node.id.index();
      below[i] = is_resolved(trace_.status[i]) || (node.parent && below[node.parent->index()]);
      if (below[i]) state_.resume[i] = 0;
      if (node.parent && below[node.parent->index()]) state_.succeeded[i] = false;
    }
  }

  const Tree& tree_;
  InterpState& state_;
  LeafOracle& oracle_;
  SemanticsFlavor flavor_;
  TickTrace trace_;
};

}  // namespace

TickTrace tick(const Tree& tree, InterpState& state, LeafOracle& oracle, SemanticsFlavor flavor) {
  if (state.resume.size() != tree.size() || state.blackboard.size() != tree.blackboard().size())
    throw Error("interpreter state does not belong to this tree");
  return Ticker(tree, state, oracle, flavor).run();
}

std::vector<TickTrace> run(const Tree& tree, LeafOracle& oracle, SemanticsFlavor flavor,
                           int ticks) {
  if (ticks < 1) throw Error("tick count must be at least 1");
  InterpState state = InterpState::initial(tree);
  std::vector<TickTrace> out;
  out.reserve(static_cast<std::size_t>(ticks));
  for (int i = 0; i < ticks; ++i) out.push_back(tick(tree, state, oracle, flavor));
  return out;
}

std::string dump(const Tree& tree, const std::vector<TickTrace>& traces) {
  std::ostringstream os;
  for (std::size_t i = 0; i < traces.size(); ++i)
    os << format_tick(tree, traces[i], static_cast<int>(i) + 1) << '\n';
  return os.str();
}

}  // namespace btv::interp
