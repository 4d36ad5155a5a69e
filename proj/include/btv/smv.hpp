#pragma once

#include <optional>
#include <string>

#include "btv/plan.hpp"
#include "btv/tree.hpp"

namespace btv::smv {

enum class BlackboardMode {
  Generate,         // blackboard module written inline
  IncludeFile,      // blackboard module read verbatim from `blackboard_path`
  GenerateAndSave,  // written inline and also saved to `blackboard_path`
};

struct EmitOptions {
  BlackboardMode blackboard_mode = BlackboardMode::Generate;
  std::string blackboard_path;
  std::optional<std::string> spec_file;  // appended verbatim
  std::optional<std::string> spec_text;  // appended verbatim, after spec_file
};

/// Renders a plan as an SMV model: one MODULE per distinct node shape, one
/// instance per node (named after the node), a blackboard module and specs.
std::string emit(const Tree& tree, const plan::Plan& plan, const EmitOptions& options = {});

/// Text of `MODULE blackboard_module(...)` as emit() generates it.
std::string blackboard_module(const Tree& tree, const plan::Plan& plan);

/// Arguments the blackboard instance is created with, e.g. "(active_node, a)".
std::string blackboard_arguments(const Tree& tree, const plan::Plan& plan);

void write_file(const std::string& path, const std::string& text);

}  // namespace btv::smv
