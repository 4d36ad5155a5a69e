#include "btv/btc_encoding.hpp"

#include "btv/error.hpp"

namespace btv::btc {

BtcState BtcState::initial(const Tree& tree) {
  BtcState s;
  s.prior_success.assign(tree.size(), false);
  s.prior_failure.assign(tree.size(), false);
  s.status.assign(tree.size(), Status::Invalid);
  s.active.assign(tree.size(), false);
  s.stored.assign(tree.size(), Status::Invalid);
  return s;
}

std::string BtcState::key() const {
  std::string k;
  k.push_back(static_cast<char>(root_enable));
  for (std::size_t i = 0; i < prior_success.size(); ++i) {
    k.push_back(static_cast<char>(prior_success[i] | (prior_failure[i] << 1) |
                                  (static_cast<int>(stored[i]) << 2)));
  }
  return k;
}

void require_compatible(const Tree& tree) {
  if (!tree.blackboard().empty()) throw UnsupportedError(kBlackboardUnsupported);
  for (const Node& node : tree.nodes()) {
    if (tree.is_composite(node.id) && node.children.size() != 2)
      throw ValidationError("'" + node.name + "' has " + std::to_string(node.children.size()) +
                            " children; the BTC encoding needs a binarized tree");
    if (tree.is_parallel(node.id)) {
      const Parallel& par = tree.parallel_of(node.id);
      if (par.synchronized)
        throw UnsupportedError("parallel '" + node.name +
                               "' is synchronized; the BTC encoding has no parallel memory");
      if (par.policy.flavor != ParallelFlavor::Threshold)
        throw ValidationError("parallel '" + node.name +
                              "' uses the PyTrees definition; the BTC encoding needs the "
                              "threshold definition");
    }
  }
}

namespace {

class Evaluator {
 public:
  Evaluator(const Tree& tree, BtcState& state, LeafOracle& oracle)
      : tree_(tree), state_(state), oracle_(oracle) {
    status_.assign(tree.size(), Status::Invalid);
    active_.assign(tree.size(), false);
    trace_.skipped.assign(tree.size(), false);
  }

  TickTrace run() {
    eval(tree_.root(), state_.root_enable);
    advance();
    trace_.status = status_;
    return std::move(trace_);
  }

 private:
  Status eval(NodeId n, bool active) {
    active_[n.index()] = active;
    const Status s = std::visit([&](const auto& k) { return eval_kind(n, active, k); },
                                tree_.kind(n));
    status_[n.index()] = s;
    return s;
  }

  Status eval_kind(NodeId n, bool active, const Leaf& leaf) {
    if (!active) return Status::Invalid;
    const StatusSet domain = leaf.profile.status_domain;
    const Status s =
        oracle_.leaf_status(state_.tick, static_cast<int>(trace_.executed.size()), n, domain);
    if (!domain.contains(s))
      throw OracleError("oracle returned a status outside the domain of leaf '" +
                        tree_.name(n) + "'");
    trace_.executed.push_back(n);
    return s;
  }

  // Selector and sequence: `stop` ends the scan (F for sequences, S for
  // selectors), `prior` is the memory flag that lets the second child resume.
  Status eval_ordered(NodeId n, bool active, bool memory, Status pass,
                      const std::vector<bool>& prior) {
    const NodeId c1 = tree_.children(n)[0];
    const NodeId c2 = tree_.children(n)[1];
    const bool resume = memory && prior[c1.index()];
    trace_.skipped[c1.index()] = resume;
    const Status s1 = eval(c1, active && !resume);
    const Status s2 = eval(c2, s1 == pass || (resume && active));
    return s1 == Status::Running || (s1 != pass && s1 != Status::Invalid) ? s1 : s2;
  }

  Status eval_kind(NodeId n, bool active, const Selector& sel) {
    return eval_ordered(n, active, sel.memory, Status::Failure, state_.prior_failure);
  }

  Status eval_kind(NodeId n, bool active, const Sequence& seq) {
    return eval_ordered(n, active, seq.memory, Status::Success, state_.prior_success);
  }

  Status eval_kind(NodeId n, bool active, const Parallel& par) {
    const NodeId c1 = tree_.children(n)[0];
    const NodeId c2 = tree_.children(n)[1];
    const Status s1 = eval(c1, active);
    const bool second = s1 != Status::Invalid;
    const Status s2 = eval(c2, second);
    if (!second) return Status::Invalid;
    const int successes = (s1 == Status::Success) + (s2 == Status::Success);
    const int runnings = (s1 == Status::Running) + (s2 == Status::Running);
    const int m = par.policy.threshold;
    if (successes >= m) return Status::Success;
    if (m > successes + runnings) return Status::Failure;
    return Status::Running;
  }

  Status eval_kind(NodeId n, bool active, const Decorator& dec) {
    const NodeId child = tree_.children(n).front();
    if (const auto* map = std::get_if<StatusMap>(&dec.kind)) return map->apply(eval(child, active));
    const Status stored = state_.stored[n.index()];
    trace_.skipped[child.index()] = stored != Status::Invalid;
    const Status cs = eval(child, active && stored == Status::Invalid);
    if (!active) return Status::Invalid;
    return stored != Status::Invalid ? stored : cs;
  }

  void advance() {
    for (const Node& node : tree_.nodes()) {
      const std::size_t i = node.id.index();
      if (tree_.is_oneshot(node.id) && state_.stored[i] == Status::Invalid) {
        const Status cs = status_[node.children.front().index()];
        if (is_resolved(cs)) state_.stored[i] = cs;
      }
      if (!node.parent) continue;
      const NodeId last = *tree_.last_child(*node.parent);
      if (is_resolved(status_[last.index()])) {
        state_.prior_success[i] = false;
        state_.prior_failure[i] = false;
      } else {
        if (status_[i] == Status::Success) state_.prior_success[i] = true;
        if (status_[i] == Status::Failure) state_.prior_failure[i] = true;
      }
    }
    state_.root_enable = status_[0] != Status::Invalid;
    state_.status = status_;
    state_.active = active_;
    ++state_.tick;
  }

  const Tree& tree_;
  BtcState& state_;
  LeafOracle& oracle_;
  std::vector<Status> status_;
  std::vector<bool> active_;
  TickTrace trace_;
};

}  // namespace

TickTrace btc_tick(const Tree& tree, BtcState& state, LeafOracle& oracle) {
  if (state.prior_success.size() != tree.size())
    throw Error("BTC state does not belong to this tree");
  return Evaluator(tree, state, oracle).run();
}

}  // namespace btv::btc
