#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btv/oracle.hpp"
#include "btv/trace.hpp"
#include "btv/tree.hpp"

namespace btv::leafenc {

/// Cursor-based transition system: every step activates one leaf (or a OneShot
/// decorator replaying its stored status); an absent cursor separates ticks.
///
/// Statuses are per step: a node is non-Invalid only on the step where the
/// cursor resolves it. Parallels accumulate their success count and failure
/// flag across the steps of one tick in `sc_base`/`ff_base`.
struct LeafState {
  std::optional<NodeId> active;
  std::vector<Status> status;   // statuses at the current step
  std::vector<bool> skip;
  std::vector<int> sc_base;     // per parallel: successes counted before this step
  std::vector<bool> ff_base;    // per parallel: failure seen before this step
  std::vector<Status> stored;   // per OneShot
  std::vector<int> blackboard;
  int step = 0;
  int tick = 0;                 // completed ticks
  int ordinal = 0;              // leaves executed so far in the current tick

  static LeafState initial(const Tree& tree);

  /// State variables only (no step/tick counters, no derived statuses).
  std::string key() const;
};

/// The NextNode recursion, evaluated on the statuses and skip flags of `state`.
std::optional<NodeId> next_node(const Tree& tree, const LeafState& state,
                                std::optional<NodeId> n, std::optional<NodeId> prev);

/// First sibling at or after `n` whose skip flag is clear.
std::optional<NodeId> next_non_skipped_child(const Tree& tree, const LeafState& state,
                                             std::optional<NodeId> n);

/// Moves the cursor once and resolves the statuses of the new step.
void step(const Tree& tree, LeafState& state, LeafOracle& oracle);

/// Steps from one absent cursor to the next. Throws EncodingError when the
/// tick takes more than 2N+1 steps.
TickTrace run_tick(const Tree& tree, LeafState& state, LeafOracle& oracle);

/// Per-step view of one tick, as seen by within-tick temporal operators.
struct StepFrame {
  std::optional<NodeId> active;
  std::vector<Status> status;
  std::vector<int> blackboard;
};

/// Like run_tick, also returning every step of the tick followed by the
/// closing absent-cursor step.
TickTrace run_tick_frames(const Tree& tree, LeafState& state, LeafOracle& oracle,
                          std::vector<StepFrame>& frames);

}  // namespace btv::leafenc
