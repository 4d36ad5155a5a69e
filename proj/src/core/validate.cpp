#include "btv/validate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

#include "btv/error.hpp"

namespace btv {

namespace {

constexpr std::string_view kReserved[] = {
    "MODULE",   "main",      "VAR",     "IVAR",     "FROZENVAR",  "DEFINE",     "ASSIGN",
    "INIT",     "TRANS",     "INVAR",   "SPEC",     "CTLSPEC",    "LTLSPEC",    "PSLSPEC",
    "INVARSPEC", "CONSTANTS", "FAIRNESS", "JUSTICE", "COMPASSION", "TRUE",       "FALSE",
    "case",     "esac",      "init",    "next",     "self",       "boolean",    "integer",
    "real",     "word",      "array",   "of",       "in",         "mod",        "union",
    "xor",      "xnor",      "G",       "F",        "X",          "U",          "V",
    "S",        "T",         "Y",       "Z",        "H",          "O",          "A",
    "E",        "AG",        "AF",      "AX",       "EG",         "EF",         "EX",
    "AU",       "EU",        "MAX",     "MIN",      "count",      "toint",      "bool",
    "signed",   "unsigned",  "extend",  "resize",   "process",    "COMPUTE",    "ISA",
    "running",  "success",   "failure", "invalid",  "active_node", "blackboard", "id",
    "node_id"};

bool valid_status_target(Status s) { return s != Status::Invalid; }

void check_effect(const Tree& tree, NodeId n, const BlackboardEffect& e,
                  std::vector<Violation>& out) {
  const auto var = tree.find_variable(e.variable);
  if (!var) {
    out.push_back({n, "undeclared variable",
                   "effect writes '" + e.variable + "' which is not declared"});
    return;
  }
  if (const auto* on = std::get_if<OnStatus>(&e.trigger); on && !valid_status_target(on->status)) {
    out.push_back({n, "trigger status", "effect trigger must be S, F or R"});
  }
  const Domain& dom = tree.blackboard()[*var].domain;
  auto check_value = [&](int v) {
    if (!domain_contains(dom, v))
      out.push_back({n, "effect value out of domain",
                     "value " + std::to_string(v) + " not in domain of '" + e.variable + "'"});
  };
  if (const auto* set = std::get_if<SetConstant>(&e.update)) check_value(set->value);
  if (const auto* map = std::get_if<SetFromStatus>(&e.update))
    for (int v : map->values) check_value(v);
}

void check_blackboard(const Tree& tree, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& decl : tree.blackboard()) {
    if (!is_identifier(decl.name) || is_reserved_word(decl.name))
      out.push_back({std::nullopt, "invalid variable name", "'" + decl.name + "'"});
    if (!seen.insert(decl.name).second)
      out.push_back({std::nullopt, "duplicate variable", "'" + decl.name + "'"});
    if (domain_size(decl.domain) <= 0) {
      out.push_back({std::nullopt, "empty domain", "variable '" + decl.name + "'"});
      continue;
    }
    if (const auto* e = std::get_if<EnumDomain>(&decl.domain)) {
      std::set<std::string> labels;
      for (const auto& label : e->labels) {
        if (!is_identifier(label) || is_reserved_word(label))
          out.push_back({std::nullopt, "invalid enum label", "'" + label + "'"});
        if (!labels.insert(label).second)
          out.push_back({std::nullopt, "duplicate enum label", "'" + label + "'"});
      }
    }
    if (!domain_contains(decl.domain, decl.initial))
      out.push_back({std::nullopt, "initial out of domain", "variable '" + decl.name + "'"});
  }
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  const auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && name.front() != '_') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_';
  });
}

bool is_reserved_word(std::string_view name) {
  return std::find(std::begin(kReserved), std::end(kReserved), name) != std::end(kReserved);
}

std::vector<Violation> validate(const Tree& tree) {
  std::vector<Violation> out;
  std::set<std::string> names;
  for (const Node& node : tree.nodes()) {
    const NodeId n = node.id;
    if (!is_identifier(node.name) || is_reserved_word(node.name))
      out.push_back({n, "invalid name", "'" + node.name + "' is not a usable identifier"});
    if (!names.insert(node.name).second)
      out.push_back({n, "duplicate name", "'" + node.name + "' appears more than once"});

    const std::size_t arity = node.children.size();
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Leaf>) {
            if (arity != 0) out.push_back({n, "leaf arity", "leaf nodes have no children"});
            if (k.profile.status_domain.empty())
              out.push_back({n, "empty status domain", "leaf must return at least one status"});
            for (const auto& e : k.profile.effects) check_effect(tree, n, e, out);
          } else if constexpr (std::is_same_v<T, Decorator>) {
            if (arity != 1)
              out.push_back({n, "decorator arity",
                             "decorator has " + std::to_string(arity) + " children, expected 1"});
            if (const auto* map = std::get_if<StatusMap>(&k.kind)) {
              if (!std::all_of(map->to.begin(), map->to.end(), valid_status_target))
                out.push_back({n, "status map", "status map must target S, F or R"});
            }
          } else {
            if (arity == 0)
              out.push_back({n, "composite arity", "composite needs at least one child"});
            if constexpr (std::is_same_v<T, Parallel>) {
              const int m = k.policy.threshold;
              if (m < 1 || m > static_cast<int>(arity))
                out.push_back({n, "threshold out of range",
                               "threshold " + std::to_string(m) + " not in [1, " +
                                   std::to_string(arity) + "]"});
            }
          }
        },
        node.kind);
  }
  check_blackboard(tree, out);
  return out;
}

std::string format_violation(const Tree& tree, const Violation& v) {
  std::ostringstream os;
  if (v.node) os << "node '" << tree.name(*v.node) << "': ";
  os << v.rule << ": " << v.detail;
  return os.str();
}

void require_valid(const Tree& tree) {
  const auto report = validate(tree);
  if (report.empty()) return;
  std::ostringstream os;
  os << "tree is not well-formed";
  for (const auto& v : report) os << "\n  " << format_violation(tree, v);
  throw ValidationError(os.str());
}

}  // namespace btv
