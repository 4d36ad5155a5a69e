#pragma once

#include <string>
#include <vector>

#include "btv/oracle.hpp"
#include "btv/trace.hpp"
#include "btv/tree.hpp"

namespace btv::btc {

/// Exact wording reported when a tree with blackboard variables is sent to
/// the BTC encoding.
inline constexpr const char* kBlackboardUnsupported =
    "BTCompiler does not support blackboard variables";

/// Approximation of the BTCompiler model over binary composites. Memory is
/// tracked with per-node prior success/failure flags that only reset when the
/// parent's last child resolves, so memory survives ancestor termination.
struct BtcState {
  std::vector<bool> prior_success;
  std::vector<bool> prior_failure;
  std::vector<Status> status;  // previous tick
  std::vector<bool> active;    // previous tick
  std::vector<Status> stored;  // per OneShot
  bool root_enable = true;
  int tick = 0;

  static BtcState initial(const Tree& tree);
  std::string key() const;
};

/// Throws UnsupportedError for blackboards and synchronized parallels,
/// ValidationError for composites without exactly two children or
/// parallels using the PyTrees definition.
void require_compatible(const Tree& tree);

/// One tick; `tree` must satisfy require_compatible.
TickTrace btc_tick(const Tree& tree, BtcState& state, LeafOracle& oracle);

}  // namespace btv::btc
