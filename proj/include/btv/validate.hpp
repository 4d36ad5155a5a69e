#pragma once

#include <optional>
#include <string>
#include <vector>

#include "btv/tree.hpp"

namespace btv {

struct Violation {
  std::optional<NodeId> node;  // absent for tree-level or blackboard rules
  std::string rule;            // short stable tag, e.g. "decorator arity"
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Checks every structural rule; an empty report means well-formed.
std::vector<Violation> validate(const Tree& tree);

/// Throws ValidationError listing every violation when the report is non-empty.
void require_valid(const Tree& tree);

std::string format_violation(const Tree& tree, const Violation& v);

/// True for names usable as SMV instance identifiers.
bool is_identifier(std::string_view name);

/// Words that clash with SMV keywords or generated names.
bool is_reserved_word(std::string_view name);

}  // namespace btv
