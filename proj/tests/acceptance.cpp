// Runs every acceptance criterion and prints one PASS/FAIL/SKIP line each.
// Exit status is non-zero if any criterion fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "btv/benchgen.hpp"
#include "btv/btc_encoding.hpp"
#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/normalize.hpp"
#include "btv/smv.hpp"
#include "btv/verify.hpp"
#include "support.hpp"

namespace {

using namespace btv;
using Clock = std::chrono::steady_clock;

enum class Outcome { Pass, Fail, Skip };

struct Result {
  Outcome outcome = Outcome::Fail;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(1);
  o << std::fixed << s << "s";
  return o.str();
}

Result verdict(bool ok, std::string detail) {
  return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)};
}

std::string first_problem(const verify::DiffReport& r) {
  const auto* d = r.first_divergence();
  return d ? "; first: " + d->summary() : "";
}

Result memoryless_corpus() {
  const auto start = Clock::now();
  const auto r = verify::diff_encodings(verify::Corpus::memoryless(), verify::DiffMode::Encodings);
  const double t = seconds_since(start);
  return verdict(r.divergences() == 0 && t < 300,
                 std::to_string(r.trees) + " trees, " + std::to_string(r.divergences()) +
                     " divergences, " + fmt_seconds(t) + first_problem(r));
}

Result memory_corpus() {
  const auto r = verify::diff_encodings(verify::Corpus::with_memory(), verify::DiffMode::Encodings);
  const Tree forgetting = dsl::load_file(testing::data_path("forgetting.bt")).tree;
  const auto f = verify::diff_trees({forgetting}, verify::DiffMode::Flavors, 3);
  const auto* d = f.first_divergence();
  const bool replayed = d && verify::replays(std::get<verify::Diverged>(d->verdict),
                                            verify::DiffMode::Flavors);
  return verdict(r.divergences() == 0 && replayed,
                 std::to_string(r.trees) + " trees, " + std::to_string(r.divergences()) +
                     " divergences" + first_problem(r) + "; forgetting divergence " +
                     (d ? (replayed ? "replays" : "does not replay") : "not found"));
}

Result btc_corpus() {
  const auto r = verify::diff_encodings(verify::Corpus::btc(), verify::DiffMode::Btc);
  const Tree bb = dsl::load_file(testing::data_path("blackboard_parallel.bt")).tree;
  std::string message;
  try {
    smv::emit(bb, plan::build(bb, plan::Family::Btc));
  } catch (const UnsupportedError& e) {
    message = e.what();
  }
  const bool rejected = message == btc::kBlackboardUnsupported;
  return verdict(r.divergences() == 0 && rejected,
                 std::to_string(r.trees) + " trees, " + std::to_string(r.divergences()) +
                     " divergences" + first_problem(r) + "; blackboard " +
                     (rejected ? "rejected" : "not rejected: '" + message + "'"));
}

Result checklist_specs() {
  const auto start = Clock::now();
  int checks = 0;
  std::string bad;
  for (int n = 1; n <= 5; ++n)
    for (bool par : {false, true})
      for (auto d : {bench::Dialect::Btc, bench::Dialect::Leaf, bench::Dialect::Total}) {
        const auto flavor = d == bench::Dialect::Btc ? ParallelFlavor::Threshold : ParallelFlavor::PyTrees;
        const Tree t = bench::gen_checklist(n, par, flavor);
        const auto sim = verify::simulator_for(t, d);
        for (const auto& p : bench::gen_specs(n, d)) {
          checks += 2;
          const auto yes = verify::check_template_spec(*sim, verify::ltl::parse(p.true_spec), 3);
          const auto no = verify::check_template_spec(*sim, verify::ltl::parse(p.false_spec), 3);
          const bool ok = yes.holds() &&
                          std::holds_alternative<verify::CounterexampleFound>(no.verdict);
          if (!ok && bad.empty())
            bad = "; wrong verdict for n=" + std::to_string(n) + (par ? " parallel " : " ") +
                  bench::dialect_name(d) + " check " + std::to_string(p.check_index);
        }
      }
  const double t = seconds_since(start);
  return verdict(bad.empty() && t < 60, std::to_string(checks) + " specs, " + fmt_seconds(t) + bad);
}

Result resume_domain() {
  const Tree t = dsl::load_file(testing::data_path("memory_chain.bt")).tree;
  const auto d = memory_resume_domain(t, t.root());
  return verdict(d.cardinality() == 4, "cardinality " + std::to_string(d.cardinality()) +
                                           " (lazy " + std::to_string(d.lazy_cardinality) + ")");
}

Result total_versions() {
  std::vector<Tree> trees;
  for (int n = 1; n <= 3; ++n)
    for (bool par : {false, true}) trees.push_back(bench::gen_checklist(n, par));
  auto corpus = verify::Corpus::with_memory();
  corpus.max_leaves = 4;
  for (auto& t : verify::enumerate(corpus)) trees.push_back(std::move(t));
  std::size_t differing = 0;
  for (const Tree& t : trees) {
    const auto v2 = verify::make_plan(t, plan::build(t, plan::Family::TotalV2));
    const auto v3 = verify::make_plan(t, plan::build(t, plan::Family::TotalV3));
    if (!verify::compare_runs(*v2, {v3.get()}, 3, verify::Compare::Full).holds()) ++differing;
  }
  std::vector<int> v2;
  std::vector<int> v3;
  for (int n = 1; n <= 8; ++n) {
    const Tree t = bench::gen_checklist(n);
    v2.push_back(plan::define_depth(plan::build(t, plan::Family::TotalV2)));
    v3.push_back(plan::define_depth(plan::build(t, plan::Family::TotalV3)));
  }
  bool linear = true;
  bool bounded = true;
  for (std::size_t i = 1; i < v2.size(); ++i) {
    linear = linear && v2[i] - v2[0] >= static_cast<int>(i);
    bounded = bounded && v3[i] == v3[0];
  }
  std::string depths = "v2 depth";
  for (int d : v2) depths += " " + std::to_string(d);
  depths += ", v3 depth";
  for (int d : v3) depths += " " + std::to_string(d);
  return verdict(differing == 0 && linear && bounded,
                 std::to_string(trees.size()) + " trees, " + std::to_string(differing) +
                     " differ; " + depths);
}

Result binarize_corpus() {
  const auto r = verify::diff_encodings(verify::Corpus::memoryless(), verify::DiffMode::Binarize);
  return verdict(r.divergences() == 0, std::to_string(r.trees) + " trees, " +
                                           std::to_string(r.divergences()) + " divergences" +
                                           first_problem(r));
}

Result deterministic_emission() {
  int stale = 0;
  std::string missing;
  const auto cases = testing::golden_cases();
  for (const auto& c : cases) {
    const std::string text = testing::golden_text(c);
    if (text != testing::golden_text(c)) ++stale;
    const std::string path = testing::golden_path(c.file);
    if (!std::filesystem::exists(path)) {
      missing += " " + c.file;
      continue;
    }
    if (dsl::read_file(path) != text) ++stale;
  }
  const Tree t = dsl::load_file(testing::data_path("blackboard_parallel.bt")).tree;
  bool fixed_point = true;
  for (auto f : {plan::Family::Leaf, plan::Family::TotalV2, plan::Family::TotalV3}) {
    const auto p = plan::build(t, f);
    smv::EmitOptions opt;
    opt.blackboard_mode = smv::BlackboardMode::GenerateAndSave;
    opt.blackboard_path =
        (std::filesystem::temp_directory_path() / "btv_acceptance_bb.smv").string();
    const std::string saved = smv::emit(t, p, opt);
    opt.blackboard_mode = smv::BlackboardMode::IncludeFile;
    fixed_point = fixed_point && smv::emit(t, p, opt) == saved;
  }
  return verdict(stale == 0 && missing.empty() && fixed_point,
                 std::to_string(cases.size()) + " golden files, " + std::to_string(stale) +
                     " mismatches" + (missing.empty() ? "" : ", missing:" + missing) +
                     "; save/include " + (fixed_point ? "identical" : "differs"));
}

Result nuxmv_smoke() {
  if (verify::nuxmv_smoke("", false).status == verify::SmokeStatus::Skip)
    return {Outcome::Skip, "BTVERIFY_NUXMV is not set"};
  std::string problems;
  int built = 0;
  for (const auto& c : testing::golden_cases()) {
    const auto r = verify::nuxmv_smoke(testing::golden_path(c.file), false);
    if (r.status == verify::SmokeStatus::Pass) ++built;
    else problems += "; " + c.file + " does not build";
  }
  int agreed = 0;
  for (auto f : {plan::Family::Leaf, plan::Family::TotalV2, plan::Family::TotalV3, plan::Family::Btc}) {
    const auto d = bench::dialect_of(f);
    const Tree t = bench::gen_checklist(
        2, false, f == plan::Family::Btc ? ParallelFlavor::Threshold : ParallelFlavor::PyTrees);
    const auto specs = bench::gen_specs(2, d);
    std::vector<bool> expected;
    const auto sim = verify::simulator_for(t, d);
    for (const auto& p : specs)
      for (const auto* text : {&p.true_spec, &p.false_spec})
        expected.push_back(verify::check_template_spec(*sim, verify::ltl::parse(*text), 3).holds());
    const auto path = std::filesystem::temp_directory_path() /
                      ("btv_acceptance_" + plan::family_name(f) + ".smv");
    smv::EmitOptions opt;
    opt.spec_text = bench::to_smv(specs);
    smv::write_file(path.string(), smv::emit(t, plan::build(t, f), opt));
    const auto r = verify::nuxmv_smoke(path.string(), true);
    if (r.status == verify::SmokeStatus::Pass && r.verdicts == expected) ++agreed;
    else problems += "; " + plan::family_name(f) + " verdicts disagree";
  }
  return verdict(problems.empty(), std::to_string(built) + " golden files build, " +
                                       std::to_string(agreed) + "/4 encodings agree" + problems);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"memoryless corpus: leaf and total match the interpreter", memoryless_corpus},
      {"memory corpus: no divergences, forgetting divergence replays", memory_corpus},
      {"btc on binarized corpus, blackboard rejected", btc_corpus},
      {"checklist specs n=1..5 in three dialects", checklist_specs},
      {"memory resume domain of the chain example is 4", resume_domain},
      {"total v2 and v3 agree; define depth linear vs bounded", total_versions},
      {"binarize preserves root traces", binarize_corpus},
      {"deterministic emission and golden files", deterministic_emission},
      {"nuXmv smoke", nuxmv_smoke},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = r.outcome == Outcome::Pass ? "PASS" : r.outcome == Outcome::Skip ? "SKIP" : "FAIL";
    if (r.outcome == Outcome::Fail) ++failed;
    std::cout << "criterion " << i + 1 << " " << tag << ": " << criteria[i].first << " ("
              << r.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
