#include "btv/trace.hpp"

#include <sstream>

namespace btv {

std::string format_tick(const Tree& tree, const TickTrace& trace, int tick_number) {
  std::ostringstream os;
  os << "tick " << tick_number << ": root=" << status_letter(trace.root()) << " executed=[";
  for (std::size_t i = 0; i < trace.executed.size(); ++i) {
    if (i) os << ',';
    os << tree.name(trace.executed[i]);
  }
  os << "] bb={";
  const auto& decls = tree.blackboard();
  for (std::size_t i = 0; i < decls.size() && i < trace.blackboard.size(); ++i) {
    if (i) os << ',';
    os << decls[i].name << '=' << format_value(decls[i].domain, trace.blackboard[i]);
  }
  os << '}';
  return os.str();
}

std::optional<std::string> first_difference(const Tree& tree, const TickTrace& expected,
                                            const TickTrace& actual) {
  if (expected.status.size() != actual.status.size()) return "node count";
  for (std::size_t i = 0; i < expected.status.size(); ++i) {
    if (expected.status[i] != actual.status[i]) {
      return "status of " + tree.name(NodeId{static_cast<std::uint32_t>(i)}) + " (" +
             status_letter(expected.status[i]) + " vs " + status_letter(actual.status[i]) + ")";
    }
  }
  if (expected.executed != actual.executed) return std::string("executed");
  for (std::size_t i = 0; i < expected.skipped.size() && i < actual.skipped.size(); ++i) {
    if (expected.skipped[i] != actual.skipped[i])
      return "skip of " + tree.name(NodeId{static_cast<std::uint32_t>(i)});
  }
  if (expected.skipped.size() != actual.skipped.size()) return std::string("skipped");
  if (expected.blackboard != actual.blackboard) return std::string("blackboard");
  return std::nullopt;
}

std::vector<int> initial_blackboard(const Tree& tree) {
  std::vector<int> out;
  out.reserve(tree.blackboard().size());
  for (const auto& decl : tree.blackboard()) out.push_back(decl.initial);
  return out;
}

}  // namespace btv
