#pragma once

#include <string>
#include <vector>

#include "btv/plan.hpp"
#include "btv/tree.hpp"

namespace btv::testing {

std::string data_path(const std::string& name);
std::string golden_path(const std::string& name);

/// Trees and models pinned by the golden files.
struct GoldenCase {
  std::string file;
  Tree tree;
  plan::Family family;
  std::string specs;
};

std::vector<GoldenCase> golden_cases();
std::string golden_text(const GoldenCase& c);

bool update_golden();

}  // namespace btv::testing
