#pragma once

#include <string>
#include <vector>

#include "btv/plan.hpp"
#include "btv/tree.hpp"

namespace btv::bench {

/// Naming convention of the specs: which observables an encoding exposes.
enum class Dialect { Btc, Leaf, Total };

std::string dialect_name(Dialect d);
Dialect dialect_of(plan::Family f);

struct SpecPair {
  int check_index = 1;
  std::string true_spec;
  std::string false_spec;
  Dialect dialect = Dialect::Total;
};

/// n checks `checkX = selector[safety_checkX {S,F}, backupX {S}]`, chained by
/// binary sequences (or parallels needing both children) with check1 nearest
/// the root. The BTC encoding needs ParallelFlavor::Threshold.
Tree gen_checklist(int n, bool parallel = false, ParallelFlavor flavor = ParallelFlavor::PyTrees);

std::vector<SpecPair> gen_specs(int n, Dialect dialect);

/// LTLSPEC lines, true spec then false spec for each check.
std::string to_smv(const std::vector<SpecPair>& specs);

}  // namespace btv::bench
