#pragma once

#include <optional>
#include <string>

#include "btv/tree.hpp"

namespace btv::dsl {

inline constexpr int kFormatVersion = 1;

struct TreeDocument {
  int format_version = kFormatVersion;
  Tree tree;
  std::optional<std::string> blackboard_include;  // SMV text used instead of generated effects
  std::optional<std::string> spec_include;        // LTL spec file copied into the model

  bool operator==(const TreeDocument& o) const {
    return format_version == o.format_version && tree == o.tree &&
           blackboard_include == o.blackboard_include && spec_include == o.spec_include;
  }
};

/// Parses block text. Throws ParseError (with position) on syntax and name
/// errors and ValidationError when the resulting tree breaks a structural rule.
TreeDocument parse(const std::string& text);

/// Canonical text; parse(serialize(d)) == d.
std::string serialize(const TreeDocument& doc);
std::string serialize(const Tree& tree);

/// JSON form written by the py_trees bridge. Errors carry a JSON pointer.
TreeDocument parse_json(const std::string& text);
std::string serialize_json(const TreeDocument& doc);

/// Dispatches on the file extension (".json" selects the JSON form).
TreeDocument load_file(const std::string& path);
std::string read_file(const std::string& path);

}  // namespace btv::dsl
