#pragma once

#include <optional>
#include <string>
#include <vector>

#include "btv/tree.hpp"

namespace btv {

/// Observable outcome of one tick, shared by the interpreter and every encoding.
struct TickTrace {
  std::vector<Status> status;    // per node; Invalid when the node did not run
  std::vector<NodeId> executed;  // leaves in execution order
  std::vector<bool> skipped;     // memory skip flags in force when the tick started
  std::vector<int> blackboard;   // valuation after the tick

  Status root() const { return status.front(); }
  bool operator==(const TickTrace&) const = default;
};

/// `tick <i>: root=<S|F|R> executed=[a,b] bb={x=1,flag=true}`
std::string format_tick(const Tree& tree, const TickTrace& trace, int tick_number);

/// Name of the first field where the traces disagree ("status of b", "executed", ...).
std::optional<std::string> first_difference(const Tree& tree, const TickTrace& expected,
                                            const TickTrace& actual);

std::vector<int> initial_blackboard(const Tree& tree);

/// Writes the effects of `leaf` that fire on `status` into `blackboard`.
/// Nondeterministic updates ask `choose` for an index into the variable's domain.
template <typename Choose>
void apply_effects(const Tree& tree, NodeId leaf, Status status, std::vector<int>& blackboard,
                   Choose&& choose) {
  const auto& effects = tree.leaf_of(leaf).profile.effects;
  for (std::size_t e = 0; e < effects.size(); ++e) {
    const BlackboardEffect& effect = effects[e];
    if (!effect_fires(effect, status)) continue;
    const std::size_t var = *tree.find_variable(effect.variable);
    const Domain& dom = tree.blackboard()[var].domain;
    std::visit(
        [&](const auto& u) {
          using T = std::decay_t<decltype(u)>;
          if constexpr (std::is_same_v<T, SetConstant>) {
            blackboard[var] = u.value;
          } else if constexpr (std::is_same_v<T, SetFromStatus>) {
            blackboard[var] = u.values[run_index(status)];
          } else {
            blackboard[var] = domain_value(dom, choose(e, domain_size(dom)));
          }
        },
        effect.update);
  }
}

}  // namespace btv
