#pragma once

#include <string>
#include <vector>

#include "btv/oracle.hpp"
#include "btv/trace.hpp"
#include "btv/tree.hpp"

namespace btv::total {

/// V2 transcribes the definitions as one chain of defined expressions. V3
/// cuts the chain with intermediate variables so every defined expression has
/// bounded dependency depth.
enum class EmissionVariant { V2, V3 };

/// State carried between ticks.
struct TotalState {
  std::vector<bool> skip;
  std::vector<Status> stored;  // per OneShot
  std::vector<int> blackboard;
  int tick = 0;

  static TotalState initial(const Tree& tree);
  std::string key() const;
};

struct TotalTickResult {
  std::vector<bool> active;
  std::vector<Status> status;
  std::vector<bool> skipped;
  std::vector<bool> resume;         // ResumeFrom per node
  std::vector<int> success_count;   // per parallel, 0 elsewhere
  std::vector<NodeId> executed;     // active leaves in pre-order
};

/// Resolves one tick and advances `state` to the next tick.
TotalTickResult compute_tick(const Tree& tree, TotalState& state, LeafOracle& oracle);

TickTrace to_trace(const TotalTickResult& result, const TotalState& after);

TickTrace run_tick(const Tree& tree, TotalState& state, LeafOracle& oracle);

}  // namespace btv::total
