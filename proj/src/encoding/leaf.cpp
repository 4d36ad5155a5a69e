#include "btv/leaf_encoding.hpp"

#include "btv/error.hpp"

namespace btv::leafenc {

LeafState LeafState::initial(const Tree& tree) {
  LeafState s;
  s.status.assign(tree.size(), Status::Invalid);
  s.skip.assign(tree.size(), false);
  s.sc_base.assign(tree.size(), 0);
  s.ff_base.assign(tree.size(), false);
  s.stored.assign(tree.size(), Status::Invalid);
  s.blackboard = initial_blackboard(tree);
  return s;
}

std::string LeafState::key() const {
  std::string k;
  k.push_back(active ? static_cast<char>(active->value + 1) : '\0');
  for (std::size_t i = 0; i < skip.size(); ++i) {
    k.push_back(static_cast<char>(skip[i] | (ff_base[i] << 1)));
    k.push_back(static_cast<char>(sc_base[i]));
    k.push_back(static_cast<char>(stored[i]));
  }
  for (int v : blackboard) k.append(reinterpret_cast<const char*>(&v), sizeof v);
  return k;
}

std::optional<NodeId> next_non_skipped_child(const Tree& tree, const LeafState& state,
                                             std::optional<NodeId> n) {
  while (n && state.skip[n->index()]) n = tree.right_neighbor(*n);
  return n;
}

namespace {

bool skips_child(const Tree& tree, const LeafState& state, NodeId n) {
  return tree.is_oneshot(n) && state.stored[n.index()] != Status::Invalid;
}

std::optional<NodeId> enter_first(const Tree& tree, const LeafState& state, NodeId n) {
  const auto first = next_non_skipped_child(tree, state, tree.first_child(n));
  if (!first)
    throw EncodingError("entered '" + tree.name(n) + "' but every child is skipped");
  return first;
}

}  // namespace

std::optional<NodeId> next_node(const Tree& tree, const LeafState& state,
                                std::optional<NodeId> n, std::optional<NodeId> prev) {
  while (true) {
    if (!n) return std::nullopt;
    const NodeId node = *n;
    if (state.status[node.index()] != Status::Invalid) {
      prev = node;
      n = tree.parent(node);
      continue;
    }
    if (tree.is_leaf(node)) return node;
    const bool from_parent = prev == tree.parent(node);
    if (!from_parent && (!prev || tree.parent(*prev) != node))
      throw EncodingError("next-node query on '" + tree.name(node) +
                          "' came from a node that is neither its parent nor its child");
    if (tree.is_decorator(node)) {
      if (!from_parent)
        throw EncodingError("decorator '" + tree.name(node) + "' unresolved after its child");
      if (skips_child(tree, state, node)) return node;
      prev = node;
      n = tree.first_child(node);
      continue;
    }
    if (from_parent) {
      n = enter_first(tree, state, node);
    } else if (tree.is_parallel(node)) {
      n = next_non_skipped_child(tree, state, tree.right_neighbor(*prev));
    } else {
      n = tree.right_neighbor(*prev);
    }
    prev = node;
  }
}

namespace {

int success_count(const Tree& tree, const LeafState& s, NodeId p) {
  int count = s.sc_base[p.index()];
  for (NodeId c : tree.children(p)) count += s.status[c.index()] == Status::Success;
  return count;
}

bool found_failure(const Tree& tree, const LeafState& s, NodeId p) {
  bool found = s.ff_base[p.index()];
  for (NodeId c : tree.children(p)) found = found || s.status[c.index()] == Status::Failure;
  return found;
}

Status ordered_status(const Tree& tree, const LeafState& s, NodeId n, Status keep_going) {
  for (NodeId c : tree.children(n)) {
    const Status cs = s.status[c.index()];
    if (cs != Status::Invalid && cs != keep_going) return cs;
  }
  const NodeId last = *tree.last_child(n);
  return s.status[last.index()] == keep_going ? keep_going : Status::Invalid;
}

Status parallel_status(const Tree& tree, const LeafState& s, NodeId n) {
  const auto children = tree.children(n);
  bool done = false;
  for (std::size_t i = 0; i < children.size() && !done; ++i) {
    if (s.status[children[i].index()] == Status::Invalid) continue;
    done = true;
    for (std::size_t j = i + 1; j < children.size(); ++j)
      done = done && s.skip[children[j].index()];
  }
  if (!done) return Status::Invalid;
  if (found_failure(tree, s, n)) return Status::Failure;
  if (success_count(tree, s, n) >= tree.parallel_of(n).policy.threshold) return Status::Success;
  return Status::Running;
}

Status decorator_status(const Tree& tree, const LeafState& s, NodeId n) {
  if (s.active == n) return s.stored[n.index()];
  const Status cs = s.status[tree.first_child(n)->index()];
  if (cs == Status::Invalid) return cs;
  if (const auto* map = std::get_if<StatusMap>(&tree.decorator_of(n).kind)) return map->apply(cs);
  return cs;
}

// Statuses of the current step, children before parents.
void resolve(const Tree& tree, LeafState& s, LeafOracle& oracle) {
  for (std::size_t i = tree.size(); i-- > 0;) {
    const NodeId n{static_cast<std::uint32_t>(i)};
    Status out = Status::Invalid;
    if (tree.is_leaf(n)) {
      if (s.active == n) {
        const StatusSet domain = tree.leaf_of(n).profile.status_domain;
        out = oracle.leaf_status(s.tick, s.ordinal, n, domain);
        if (!domain.contains(out))
          throw OracleError("oracle returned a status outside the domain of leaf '" +
                            tree.name(n) + "'");
      }
    } else if (tree.is_selector(n)) {
      out = ordered_status(tree, s, n, Status::Failure);
    } else if (tree.is_sequence(n)) {
      out = ordered_status(tree, s, n, Status::Success);
    } else if (tree.is_parallel(n)) {
      out = parallel_status(tree, s, n);
    } else {
      out = decorator_status(tree, s, n);
    }
    s.status[i] = out;
  }
}

bool in_progress(const Tree& tree, const LeafState& s, NodeId p) {
  return s.active && *s.active != p && tree.in_subtree(p, *s.active);
}

}  // namespace

void step(const Tree& tree, LeafState& s, LeafOracle& oracle) {
  const std::size_t n_nodes = tree.size();

  std::optional<NodeId> next_active;
  if (!s.active) {
    next_active = next_node(tree, s, tree.root(), std::nullopt);
  } else {
    next_active = next_node(tree, s, s.active, s.active);
  }

  // anc_resolved[n]: some strict ancestor of n resolved S/F at this step.
  std::vector<bool> anc_resolved(n_nodes, false);
  for (const Node& node : tree.nodes()) {
    if (!node.parent) continue;
    const std::size_t p = node.parent->index();
    anc_resolved[node.id.index()] = anc_resolved[p] || is_resolved(s.status[p]);
  }

  std::vector<Status> stored = s.stored;
  for (const Node& node : tree.nodes()) {
    if (!tree.is_oneshot(node.id) || stored[node.id.index()] != Status::Invalid) continue;
    const Status cs = s.status[node.children.front().index()];
    if (is_resolved(cs)) stored[node.id.index()] = cs;
  }

  std::vector<bool> skip(n_nodes, false);
  for (const Node& node : tree.nodes()) {
    if (!node.parent) continue;
    const NodeId p = *node.parent;
    const std::size_t i = node.id.index();
    if (tree.is_oneshot(p)) {
      skip[i] = stored[p.index()] != Status::Invalid;
    } else if (tree.is_memory_composite(p) || tree.is_synchronized_parallel(p)) {
      bool set = false;
      if (tree.is_synchronized_parallel(p)) {
        set = s.status[i] == Status::Success;
      } else {
        for (auto r = tree.right_neighbor(node.id); r && !set; r = tree.right_neighbor(*r))
          set = s.status[r->index()] == Status::Running;
      }
      skip[i] = anc_resolved[i] ? false : set ? true : s.skip[i];
    }
  }

  std::vector<int> sc_base(n_nodes, 0);
  std::vector<bool> ff_base(n_nodes, false);
  for (const Node& node : tree.nodes()) {
    if (!tree.is_parallel(node.id)) continue;
    const std::size_t i = node.id.index();
    const bool reset = anc_resolved[i] || is_resolved(s.status[i]);
    if (reset) continue;
    if (in_progress(tree, s, node.id)) {
      sc_base[i] = success_count(tree, s, node.id);
      ff_base[i] = found_failure(tree, s, node.id);
    } else {
      for (NodeId c : node.children) sc_base[i] += s.skip[c.index()];
    }
  }

  if (s.active && tree.is_leaf(*s.active)) {
    const NodeId leaf = *s.active;
    apply_effects(tree, leaf, s.status[leaf.index()], s.blackboard,
                  [&](std::size_t effect, int size) {
                    return oracle.choose_value(s.tick, leaf, effect, size);
                  });
  }

  if (s.active && tree.is_leaf(*s.active)) ++s.ordinal;
  if (s.active && !next_active) {
    ++s.tick;
    s.ordinal = 0;
  }
  s.active = next_active;
  s.skip = std::move(skip);
  s.sc_base = std::move(sc_base);
  s.ff_base = std::move(ff_base);
  s.stored = std::move(stored);
  ++s.step;
  resolve(tree, s, oracle);
}

TickTrace run_tick_frames(const Tree& tree, LeafState& s, LeafOracle& oracle,
                          std::vector<StepFrame>& frames) {
  if (s.active) throw EncodingError("run_tick must start at an absent cursor");
  TickTrace trace;
  trace.status.assign(tree.size(), Status::Invalid);
  const std::size_t limit = 2 * tree.size() + 1;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > limit)
      throw EncodingError("tick did not finish within " + std::to_string(limit) + " steps");
    step(tree, s, oracle);
    if (steps == 0) trace.skipped = s.skip;
    frames.push_back({s.active, s.status, s.blackboard});
    if (!s.active) break;
    if (tree.is_leaf(*s.active)) trace.executed.push_back(*s.active);
    for (std::size_t i = 0; i < tree.size(); ++i)
      if (s.status[i] != Status::Invalid) trace.status[i] = s.status[i];
  }
  trace.blackboard = s.blackboard;
  return trace;
}

TickTrace run_tick(const Tree& tree, LeafState& s, LeafOracle& oracle) {
  std::vector<StepFrame> frames;
  return run_tick_frames(tree, s, oracle, frames);
}

}  // namespace btv::leafenc
