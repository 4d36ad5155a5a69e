#include "btv/oracle.hpp"

#include <sstream>

#include "btv/error.hpp"

namespace btv {

void OracleTable::merge(const OracleTable& other) {
  for (const auto& [k, v] : other.statuses) statuses[k] = v;
  for (const auto& [k, v] : other.values) values[k] = v;
}

std::string OracleTable::describe(const Tree& tree) const {
  std::ostringstream os;
  int tick = -1;
  for (const auto& [key, status] : statuses) {
    if (key.first != tick) {
      if (tick >= 0) os << "; ";
      tick = key.first;
      os << "tick " << tick + 1 << ":";
    }
    os << ' ' << tree.name(NodeId{key.second}) << '=' << status_letter(status);
  }
  for (const auto& [key, value] : values) {
    const auto& [t, leaf, effect] = key;
    os << "; tick " << t + 1 << " " << tree.name(NodeId{leaf}) << " effect " << effect
       << " -> #" << value;
  }
  return os.str();
}

Status ReplayOracle::leaf_status(int tick, int, NodeId leaf, StatusSet domain) {
  const auto it = table_.statuses.find({tick, leaf.value});
  if (it == table_.statuses.end())
    throw OracleError("no recorded status for leaf #" + std::to_string(leaf.value) +
                      " at tick " + std::to_string(tick + 1));
  if (!domain.contains(it->second))
    throw OracleError("recorded status outside the domain of leaf #" +
                      std::to_string(leaf.value));
  return it->second;
}

int ReplayOracle::choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) {
  const auto it = table_.values.find({tick, leaf.value, effect});
  if (it == table_.values.end() || it->second < 0 || it->second >= domain_size)
    throw OracleError("no recorded value for effect " + std::to_string(effect) + " of leaf #" +
                      std::to_string(leaf.value) + " at tick " + std::to_string(tick + 1));
  return it->second;
}

Status RandomOracle::leaf_status(int, int, NodeId, StatusSet domain) {
  const auto members = domain.members();
  if (members.empty()) throw OracleError("leaf has an empty status domain");
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  return members[pick(rng_)];
}

int RandomOracle::choose_value(int, NodeId, std::size_t, int domain_size) {
  std::uniform_int_distribution<int> pick(0, domain_size - 1);
  return pick(rng_);
}

int EnumeratingOracle::next_choice(int arity) {
  if (pos_ < stack_.size()) {
    if (stack_[pos_].arity != arity)
      throw OracleError("decision sequence is not deterministic under replay");
    return stack_[pos_++].value;
  }
  stack_.push_back({0, arity});
  ++pos_;
  return 0;
}

Status EnumeratingOracle::leaf_status(int tick, int, NodeId leaf, StatusSet domain) {
  const auto members = domain.members();
  if (members.empty()) throw OracleError("leaf has an empty status domain");
  const Status s = members[next_choice(static_cast<int>(members.size()))];
  table_.statuses[{tick, leaf.value}] = s;
  return s;
}

int EnumeratingOracle::choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) {
  const int v = next_choice(domain_size);
  table_.values[{tick, leaf.value, effect}] = v;
  return v;
}

bool EnumeratingOracle::advance() {
  stack_.resize(pos_);
  while (!stack_.empty() && stack_.back().value + 1 >= stack_.back().arity) stack_.pop_back();
  pos_ = 0;
  table_ = {};
  if (stack_.empty()) return false;
  ++stack_.back().value;
  return true;
}

void EnumeratingOracle::reset() {
  stack_.clear();
  pos_ = 0;
  table_ = {};
}

}  // namespace btv
