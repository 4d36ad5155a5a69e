#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "btv/benchgen.hpp"
#include "btv/btc_encoding.hpp"
#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/interp.hpp"
#include "btv/normalize.hpp"
#include "btv/plan.hpp"
#include "btv/smv.hpp"
#include "btv/verify.hpp"
#include "btv/version.hpp"

namespace fs = std::filesystem;
using namespace btv;

namespace {

constexpr int kOk = 0;
constexpr int kFound = 1;
constexpr int kUsage = 2;

/// Problem with the command line or its inputs; reported with exit code 2.
struct UsageError : Error {
  using Error::Error;
};

const std::map<std::string, plan::Family> kFamilies{{"leaf", plan::Family::Leaf},
                                                    {"total-v2", plan::Family::TotalV2},
                                                    {"total-v3", plan::Family::TotalV3},
                                                    {"btc", plan::Family::Btc}};

void emit_output(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else smv::write_file(out, text);
}

// Include paths inside a document are relative to the document.
std::string beside(const std::string& doc, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(doc).parent_path() / p).string();
}

Tree btc_form(const Tree& tree) {
  return binarize(with_parallel_flavor(tree, ParallelFlavor::Threshold), BinarizeTarget::Btc);
}

// --------------------------------------------------------------------------

struct CompileArgs {
  std::string encoding;
  std::string tree;
  std::string blackboard_in;
  std::string save_blackboard;
  std::string specs;
  std::string out;
  bool binarize = false;
};

int run_compile(const CompileArgs& a) {
  if (!a.blackboard_in.empty() && !a.save_blackboard.empty())
    throw UsageError("--blackboard-in and --save-blackboard cannot be combined");
  const auto doc = dsl::load_file(a.tree);
  const plan::Family family = kFamilies.at(a.encoding);
  Tree tree = doc.tree;
  if (family == plan::Family::Btc) {
    if (!tree.blackboard().empty()) throw UnsupportedError(btc::kBlackboardUnsupported);
    if (a.binarize) tree = btc_form(tree);
  }
  smv::EmitOptions opt;
  if (!a.blackboard_in.empty()) {
    opt.blackboard_mode = smv::BlackboardMode::IncludeFile;
    opt.blackboard_path = a.blackboard_in;
  } else if (!a.save_blackboard.empty()) {
    opt.blackboard_mode = smv::BlackboardMode::GenerateAndSave;
    opt.blackboard_path = a.save_blackboard;
  } else if (doc.blackboard_include) {
    opt.blackboard_mode = smv::BlackboardMode::IncludeFile;
    opt.blackboard_path = beside(a.tree, *doc.blackboard_include);
  }
  if (!a.specs.empty()) opt.spec_file = a.specs;
  else if (doc.spec_include) opt.spec_file = beside(a.tree, *doc.spec_include);
  emit_output(smv::emit(tree, plan::build(tree, family), opt), a.out);
  return kOk;
}

// --------------------------------------------------------------------------

struct SimulateArgs {
  std::string tree;
  int ticks = 1;
  std::string flavor = "pytrees";
  std::string encoding;
  std::uint64_t seed = 0;
};

int run_simulate(const SimulateArgs& a) {
  const Tree tree = dsl::load_file(a.tree).tree;
  RandomOracle oracle(a.seed);
  std::vector<TickTrace> traces;
  if (!a.encoding.empty()) {
    traces = verify::interpret_plan(tree, plan::build(tree, kFamilies.at(a.encoding)), oracle, a.ticks);
  } else {
    const auto flavor = a.flavor == "btc" ? interp::SemanticsFlavor::BtCompiler
                                          : interp::SemanticsFlavor::PyTrees;
    traces = interp::run(tree, oracle, flavor, a.ticks);
  }
  std::cout << interp::dump(tree, traces);
  return kOk;
}

// --------------------------------------------------------------------------

struct DiffArgs {
  std::string mode = "encodings";
  std::string corpus = "memoryless";
  int max_leaves = 0;
  int horizon = 3;
  bool wrappers = false;
  std::vector<std::string> trees;
  std::string json;
};

int run_diff(const DiffArgs& a) {
  static const std::map<std::string, verify::DiffMode> modes{
      {"encodings", verify::DiffMode::Encodings}, {"plans", verify::DiffMode::Plans},
      {"btc", verify::DiffMode::Btc},             {"flavors", verify::DiffMode::Flavors},
      {"binarize", verify::DiffMode::Binarize}};
  const verify::DiffMode mode = modes.at(a.mode);
  verify::DiffReport report;
  std::string label;
  if (!a.trees.empty()) {
    std::vector<Tree> trees;
    for (const auto& f : a.trees) trees.push_back(dsl::load_file(f).tree);
    report = verify::diff_trees(trees, mode, a.horizon);
    label = a.mode + " on " + std::to_string(trees.size()) + " file(s)";
  } else {
    verify::Corpus c = a.corpus == "with-memory" ? verify::Corpus::with_memory()
                       : a.corpus == "btc"       ? verify::Corpus::btc()
                                                 : verify::Corpus::memoryless();
    if (a.max_leaves > 0) c.max_leaves = a.max_leaves;
    c.horizon = a.horizon;
    if (a.wrappers)
      c.wrappers = {verify::Wrapper::Inverter, verify::Wrapper::RunningIsFailure,
                    verify::Wrapper::OneShot};
    report = verify::diff_encodings(c, mode);
    label = a.mode + " on corpus " + a.corpus + " (" + std::to_string(c.max_leaves) + " leaves)";
  }
  std::cout << label << ": " << report.trees << " trees, " << report.states << " states, "
            << report.transitions << " transitions, " << report.divergences() << " divergences\n";
  if (const auto* d = report.first_divergence()) std::cout << "first: " << d->summary() << "\n";
  if (!a.json.empty()) smv::write_file(a.json, verify::report_json(report, label));
  return report.divergences() ? kFound : kOk;
}

// --------------------------------------------------------------------------

struct GenArgs {
  int n = 1;
  bool parallel = false;
  std::string dialect = "total";
  std::string out_dir = ".";
  bool json = false;
};

int run_gen(const GenArgs& a) {
  if (a.n < 1) throw UsageError("--n must be at least 1");
  const bench::Dialect d = a.dialect == "btc"    ? bench::Dialect::Btc
                           : a.dialect == "leaf" ? bench::Dialect::Leaf
                                                 : bench::Dialect::Total;
  const ParallelFlavor flavor = d == bench::Dialect::Btc ? ParallelFlavor::Threshold
                                                         : ParallelFlavor::PyTrees;
  const Tree tree = bench::gen_checklist(a.n, a.parallel, flavor);
  const std::string stem = std::string(a.parallel ? "parallel_checklist_" : "checklist_") +
                           std::to_string(a.n);
  fs::create_directories(a.out_dir);
  dsl::TreeDocument doc{dsl::kFormatVersion, tree, std::nullopt, std::nullopt};
  const fs::path tree_file = fs::path(a.out_dir) / (stem + (a.json ? ".bt.json" : ".bt"));
  const fs::path spec_file = fs::path(a.out_dir) / (stem + "." + a.dialect + ".ltl");
  smv::write_file(tree_file.string(), a.json ? dsl::serialize_json(doc) : dsl::serialize(doc));
  smv::write_file(spec_file.string(), bench::to_smv(bench::gen_specs(a.n, d)));
  std::cout << tree_file.string() << "\n" << spec_file.string() << "\n";
  return kOk;
}

// --------------------------------------------------------------------------

struct CheckArgs {
  std::string tree;
  std::string encoding;
  std::string spec;
  int horizon = 3;
  bool binarize = false;
};

int run_check(const CheckArgs& a) {
  Tree tree = dsl::load_file(a.tree).tree;
  const plan::Family family = kFamilies.at(a.encoding);
  if (family == plan::Family::Btc && a.binarize) tree = btc_form(tree);
  const auto sim = verify::make_plan(tree, plan::build(tree, family));
  const auto specs = verify::ltl::split_specs(dsl::read_file(a.spec));
  if (specs.empty()) throw UsageError("no specifications in '" + a.spec + "'");
  int code = kOk;
  for (const auto& text : specs) {
    const auto result = verify::check_template_spec(*sim, verify::ltl::parse(text), a.horizon);
    if (const auto* cx = std::get_if<verify::CounterexampleFound>(&result.verdict)) {
      code = kFound;
      std::cout << "counterexample: " << text << "\n"
                << "  " << cx->description << "\n"
                << interp::dump(tree, cx->trace);
    } else {
      std::cout << "holds: " << text << "\n";
    }
  }
  return code;
}

// --------------------------------------------------------------------------

struct BridgeArgs {
  std::string in;
  std::string out;
};

int run_bridge(const BridgeArgs& a) {
  const std::string text = dsl::read_file(a.in);
  // The bridge writes either a bare document or {"document": ..., "warnings": [...]}.
  std::string doc_text = text;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    j = nullptr;
  }
  if (j.is_object() && j.contains("document")) {
    doc_text = j["document"].dump();
    if (j.contains("warnings"))
      for (const auto& w : j["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
  const dsl::TreeDocument doc = dsl::parse_json(doc_text);
  emit_output(dsl::serialize(doc), a.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior tree to SMV compiler and checker"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::vector<std::string> families;
  for (const auto& [k, v] : kFamilies) families.push_back(k);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Emit an SMV model");
  compile->add_option("--encoding", ca.encoding)->required()->check(CLI::IsMember(families));
  compile->add_option("--tree", ca.tree)->required()->check(CLI::ExistingFile);
  compile->add_option("--blackboard-in", ca.blackboard_in, "Use this blackboard module verbatim")
      ->check(CLI::ExistingFile);
  compile->add_option("--save-blackboard", ca.save_blackboard, "Also write the generated blackboard module");
  compile->add_option("--specs", ca.specs, "LTL spec file appended verbatim")->check(CLI::ExistingFile);
  compile->add_option("--out", ca.out, "Output file (default: stdout)");
  compile->add_flag("--binarize", ca.binarize, "For btc: binarize and use threshold parallels first");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Tick a tree with a seeded random oracle");
  simulate->add_option("--tree", sa.tree)->required()->check(CLI::ExistingFile);
  simulate->add_option("--ticks", sa.ticks)->required()->check(CLI::PositiveNumber);
  simulate->add_option("--flavor", sa.flavor)->check(CLI::IsMember({"pytrees", "btc"}));
  simulate->add_option("--encoding", sa.encoding, "Run the encoding's plan instead of the interpreter")
      ->check(CLI::IsMember(families));
  simulate->add_option("--seed", sa.seed);

  DiffArgs da;
  auto* diff = app.add_subcommand("diff", "Exhaustive differential testing");
  diff->add_option("--mode", da.mode)
      ->check(CLI::IsMember({"encodings", "plans", "btc", "flavors", "binarize"}));
  diff->add_option("--corpus", da.corpus)->check(CLI::IsMember({"memoryless", "with-memory", "btc"}));
  diff->add_option("--max-leaves", da.max_leaves)->check(CLI::Range(1, 6));
  diff->add_option("--horizon", da.horizon)->check(CLI::Range(1, 10));
  diff->add_flag("--wrappers", da.wrappers, "Also wrap nodes in decorators");
  diff->add_option("--tree", da.trees, "Diff these trees instead of a corpus")->check(CLI::ExistingFile);
  diff->add_option("--json", da.json, "Write a JSON report");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen-checklist", "Write a checklist tree and its specs");
  gen->add_option("--n", ga.n)->required();
  gen->add_flag("--parallel", ga.parallel);
  gen->add_option("--dialect", ga.dialect)->check(CLI::IsMember({"total", "leaf", "btc"}));
  gen->add_option("--out-dir", ga.out_dir);
  gen->add_flag("--json", ga.json, "Write the tree as .bt.json");

  CheckArgs ka;
  auto* check = app.add_subcommand("check", "Bounded check of G (...) specs");
  check->add_option("--tree", ka.tree)->required()->check(CLI::ExistingFile);
  check->add_option("--encoding", ka.encoding)->required()->check(CLI::IsMember(families));
  check->add_option("--spec", ka.spec)->required()->check(CLI::ExistingFile);
  check->add_option("--horizon", ka.horizon)->check(CLI::Range(1, 20));
  check->add_flag("--binarize", ka.binarize, "For btc: binarize and use threshold parallels first");

  BridgeArgs ba;
  auto* bridge = app.add_subcommand("bridge-import", "Convert a .bt.json document to .bt text");
  bridge->add_option("--in", ba.in)->required()->check(CLI::ExistingFile);
  bridge->add_option("--out", ba.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*compile) return run_compile(ca);
    if (*simulate) return run_simulate(sa);
    if (*diff) return run_diff(da);
    if (*gen) return run_gen(ga);
    if (*check) return run_check(ka);
    if (*bridge) return run_bridge(ba);
  } catch (const std::exception& e) {
    std::cerr << "btverify: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
