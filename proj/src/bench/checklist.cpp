#include "btv/benchgen.hpp"

#include "btv/error.hpp"

namespace btv::bench {

std::string dialect_name(Dialect d) {
  switch (d) {
    case Dialect::Btc: return "btc";
    case Dialect::Leaf: return "leaf";
    case Dialect::Total: return "total";
  }
  return "?";
}

Dialect dialect_of(plan::Family f) {
  switch (f) {
    case plan::Family::Leaf: return Dialect::Leaf;
    case plan::Family::Btc: return Dialect::Btc;
    default: return Dialect::Total;
  }
}

namespace {

NodeSpec check(int x) {
  const std::string k = std::to_string(x);
  return selector("check" + k, {leaf("safety_check" + k, {Status::Success, Status::Failure}),
                                leaf("backup" + k, {Status::Success})});
}

NodeSpec chain(int from, int n, bool parallel, ParallelFlavor flavor) {
  if (from == n) return check(from);
  std::vector<NodeSpec> kids{check(from), chain(from + 1, n, parallel, flavor)};
  const std::string k = std::to_string(from);
  if (parallel) return btv::parallel("parallel" + k, std::move(kids), 2, false, flavor);
  return sequence("sequence" + k, std::move(kids));
}

}  // namespace

Tree gen_checklist(int n, bool parallel, ParallelFlavor flavor) {
  if (n < 1) throw Error("checklist needs at least one check");
  return Tree::build(chain(1, n, parallel, flavor));
}

std::vector<SpecPair> gen_specs(int n, Dialect dialect) {
  if (n < 1) throw Error("checklist needs at least one check");
  std::vector<SpecPair> out;
  for (int x = 1; x <= n; ++x) {
    const std::string k = std::to_string(x);
    const std::string guard = "safety_check" + k + ".status = failure -> ";
    SpecPair p;
    p.check_index = x;
    p.dialect = dialect;
    switch (dialect) {
      case Dialect::Btc:
        p.true_spec = "G (" + guard + "backup" + k + ".enable = TRUE)";
        p.false_spec = "G (" + guard + "backup" + k + ".enable = FALSE)";
        break;
      case Dialect::Leaf: {
        const std::string until = "(!(active_node = -1) U backup" + k + ".status = success)";
        p.true_spec = "G (" + guard + until + ")";
        p.false_spec = "G (" + guard + "!" + until + ")";
        break;
      }
      case Dialect::Total:
        p.true_spec = "G (" + guard + "backup" + k + ".status = success)";
        p.false_spec = "G (" + guard + "!(backup" + k + ".status = success))";
        break;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string to_smv(const std::vector<SpecPair>& specs) {
  std::string out;
  for (const auto& p : specs) {
    out += "LTLSPEC " + p.true_spec + ";\n";
    out += "LTLSPEC " + p.false_spec + ";\n";
  }
  return out;
}

}  // namespace btv::bench
