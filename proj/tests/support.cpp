#include "support.hpp"

#include <cstdlib>

#include "btv/benchgen.hpp"
#include "btv/smv.hpp"

namespace btv::testing {

std::string data_path(const std::string& name) { return std::string(BTV_TEST_DATA) + "/" + name; }
std::string golden_path(const std::string& name) { return std::string(BTV_GOLDEN) + "/" + name; }

bool update_golden() {
  const char* v = std::getenv("BTVERIFY_UPDATE_GOLDEN");
  return v && *v && std::string(v) != "0";
}

std::vector<GoldenCase> golden_cases() {
  std::vector<GoldenCase> out;
  for (plan::Family f : {plan::Family::Leaf, plan::Family::TotalV2, plan::Family::TotalV3,
                         plan::Family::Btc}) {
    const std::string fam = plan::family_name(f);
    const auto flavor = f == plan::Family::Btc ? ParallelFlavor::Threshold : ParallelFlavor::PyTrees;
    const auto dialect = bench::dialect_of(f);
    out.push_back({fam + "_single.smv", Tree::build(leaf("a")), f, ""});
    for (int n : {1, 3})
      out.push_back({fam + "_checklist" + std::to_string(n) + ".smv",
                     bench::gen_checklist(n, false, flavor), f,
                     bench::to_smv(bench::gen_specs(n, dialect))});
  }
  return out;
}

std::string golden_text(const GoldenCase& c) {
  smv::EmitOptions opt;
  if (!c.specs.empty()) opt.spec_text = c.specs;
  return smv::emit(c.tree, plan::build(c.tree, c.family), opt);
}

}  // namespace btv::testing
