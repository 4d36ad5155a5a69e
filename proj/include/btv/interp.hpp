#pragma once

#include <string>
#include <vector>

#include "btv/oracle.hpp"
#include "btv/trace.hpp"
#include "btv/tree.hpp"

namespace btv::interp {

/// PyTrees: memory is forgotten below any node that returns S/F, parallels fail on
/// any child failure. BtCompiler: a node only forgets its own memory when it
/// returns S/F, parallels fail once the threshold is unreachable, no
/// synchronized parallels.
enum class SemanticsFlavor { PyTrees, BtCompiler };

std::string flavor_name(SemanticsFlavor flavor);

struct InterpState {
  std::vector<int> resume;       // memory selector/sequence: index of the child to resume from
  std::vector<bool> succeeded;   // child of a synchronized parallel that already succeeded
  std::vector<Status> stored;    // OneShot: final status, Invalid until the child resolves
  std::vector<int> blackboard;
  int tick = 0;

  static InterpState initial(const Tree& tree);

  /// Everything except the tick counter, packed for hashing.
  std::string key() const;
  bool operator==(const InterpState&) const = default;
};

/// Skip flags implied by a state: children of memory nodes before the resume
/// point, held successes of synchronized parallels and children of OneShots
/// that already resolved.
std::vector<bool> skip_flags(const Tree& tree, const InterpState& state);

/// Runs one tick in place and returns its trace.
TickTrace tick(const Tree& tree, InterpState& state, LeafOracle& oracle, SemanticsFlavor flavor);

std::vector<TickTrace> run(const Tree& tree, LeafOracle& oracle, SemanticsFlavor flavor,
                           int ticks);

/// One line per tick, numbered from 1.
std::string dump(const Tree& tree, const std::vector<TickTrace>& traces);

}  // namespace btv::interp
