#include <sstream>
#include <unordered_set>

#include "btv/error.hpp"
#include "btv/normalize.hpp"
#include "btv/plan.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

std::string CheckResult::summary() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Holds>) {
          return "holds";
        } else if constexpr (std::is_same_v<T, CounterexampleFound>) {
          return "counterexample at tick " + std::to_string(v.tick) + ": " + v.description;
        } else {
          return "diverged at tick " + std::to_string(v.tick) + " (" + v.left + " vs " +
                 v.right + "): " + v.field + "; decisions: " + v.oracle.describe(*v.tree);
        }
      },
      verdict);
}

std::size_t DiffReport::divergences() const {
  std::size_t n = 0;
  for (const auto& r : results) n += !r.holds();
  return n;
}

const CheckResult* DiffReport::first_divergence() const {
  for (const auto& r : results)
    if (!r.holds()) return &r;
  return nullptr;
}

namespace {

std::optional<std::string> compare_traces(const Tree& tree, const TickTrace& a,
                                          const TickTrace& b, Compare mode) {
  switch (mode) {
    case Compare::Full: return first_difference(tree, a, b);
    case Compare::Statuses: {
      TickTrace x = a;
      TickTrace y = b;
      x.skipped.clear();
      y.skipped.clear();
      x.blackboard.clear();
      y.blackboard.clear();
      return first_difference(tree, x, y);
    }
    case Compare::Root:
      if (a.root() != b.root())
        return std::string("root status (") + status_letter(a.root()) + " vs " +
               status_letter(b.root()) + ")";
      return std::nullopt;
  }
  return std::nullopt;
}

struct Visit {
  std::vector<std::unique_ptr<Simulator>> sims;
  std::size_t parent = 0;
  OracleTable decisions;  // of the tick that led here
};

OracleTable path_decisions(const std::vector<Visit>& visits, std::size_t at,
                           const OracleTable& last) {
  OracleTable out = last;
  for (std::size_t i = at; i != 0; i = visits[i].parent) out.merge(visits[i].decisions);
  return out;
}

}  // namespace

CheckResult compare_runs(const Simulator& reference, const std::vector<const Simulator*>& others,
                         int horizon, Compare compare, Exploration* stats) {
  const Tree& ref_tree = reference.tree();
  std::vector<bool> renamed;
  for (const Simulator* o : others)
    renamed.push_back(!(o->tree().size() == ref_tree.size() && o->tree() == ref_tree));

  std::vector<Visit> visits;
  Visit root;
  root.sims.push_back(reference.clone());
  for (const Simulator* o : others) root.sims.push_back(o->clone());
  visits.push_back(std::move(root));

  auto joint_key = [](const std::vector<std::unique_ptr<Simulator>>& sims) {
    std::string k;
    for (const auto& s : sims) {
      k += s->key();
      k.push_back('\x7f');
    }
    return k;
  };
  std::unordered_set<std::string> seen{joint_key(visits[0].sims)};

  std::size_t frontier_begin = 0;
  std::size_t transitions = 0;
  for (int depth = 0; depth < horizon; ++depth) {
    const std::size_t frontier_end = visits.size();
    for (std::size_t v = frontier_begin; v < frontier_end; ++v) {
      EnumeratingOracle decide;
      do {
        std::vector<std::unique_ptr<Simulator>> next;
        next.push_back(visits[v].sims[0]->clone());
        const TickTrace expected = next[0]->tick(decide);
        ReplayOracle replay(decide.table());
        for (std::size_t i = 0; i < others.size(); ++i) {
          next.push_back(visits[v].sims[i + 1]->clone());
          std::optional<std::string> diff;
          try {
            TickTrace actual;
            if (renamed[i]) {
              RenamingOracle rename(ref_tree, next.back()->tree(), replay);
              actual = next.back()->tick(rename);
            } else {
              actual = next.back()->tick(replay);
            }
            diff = compare_traces(ref_tree, expected, actual, renamed[i] ? Compare::Root : compare);
          } catch (const OracleError& e) {
            diff = std::string("executed (asked for an unrecorded decision: ") + e.what() + ")";
          } catch (const EncodingError& e) {
            diff = std::string("encoding error: ") + e.what();
          }
          if (diff) {
            Diverged d;
            d.tree = std::make_shared<const Tree>(ref_tree);
            d.oracle = path_decisions(visits, v, decide.table());
            d.tick = depth + 1;
            d.field = *diff;
            d.left = reference.name();
            d.right = others[i]->name();
            if (stats) stats->states += visits.size(), stats->transitions += transitions;
            return CheckResult{std::move(d)};
          }
        }
        ++transitions;
        std::string k = joint_key(next);
        if (seen.insert(std::move(k)).second) {
          Visit nv;
          nv.sims = std::move(next);
          nv.parent = v;
          nv.decisions = decide.table();
          visits.push_back(std::move(nv));
        }
      } while (decide.advance());
    }
    frontier_begin = frontier_end;
    if (frontier_begin == visits.size()) break;
  }
  if (stats) stats->states += visits.size(), stats->transitions += transitions;
  return CheckResult{Holds{}};
}

namespace {

struct Pair {
  std::unique_ptr<Simulator> reference;
  std::vector<std::unique_ptr<Simulator>> others;
  Compare compare = Compare::Full;
};

Tree btc_form(const Tree& tree) {
  return binarize(with_parallel_flavor(tree, ParallelFlavor::Threshold), BinarizeTarget::Btc);
}

Pair setup(const Tree& tree, DiffMode mode) {
  Pair p;
  switch (mode) {
    case DiffMode::Encodings:
      p.reference = make_interpreter(tree, interp::SemanticsFlavor::PyTrees);
      p.others.push_back(make_leaf(tree));
      p.others.push_back(make_total(tree));
      p.compare = Compare::Full;
      break;
    case DiffMode::Plans:
      p.reference = make_interpreter(tree, interp::SemanticsFlavor::PyTrees);
      for (plan::Family f : {plan::Family::Leaf, plan::Family::TotalV2, plan::Family::TotalV3})
        p.others.push_back(make_plan(tree, plan::build(tree, f)));
      p.compare = Compare::Full;
      break;
    case DiffMode::Btc: {
      const Tree bin = btc_form(tree);
      p.reference = make_interpreter(bin, interp::SemanticsFlavor::BtCompiler);
      p.others.push_back(make_btc(bin));
      p.others.push_back(make_plan(bin, plan::build(bin, plan::Family::Btc)));
      p.compare = Compare::Statuses;
      break;
    }
    case DiffMode::Flavors:
      p.reference = make_interpreter(tree, interp::SemanticsFlavor::PyTrees);
      p.others.push_back(make_interpreter(tree, interp::SemanticsFlavor::BtCompiler));
      p.compare = Compare::Statuses;
      break;
    case DiffMode::Binarize:
      p.reference = make_interpreter(tree, interp::SemanticsFlavor::PyTrees);
      p.others.push_back(make_interpreter(binarize(tree), interp::SemanticsFlavor::PyTrees));
      p.compare = Compare::Root;
      break;
  }
  return p;
}

}  // namespace

DiffReport diff_trees(const std::vector<Tree>& trees, DiffMode mode, int horizon) {
  DiffReport report;
  for (const Tree& tree : trees) {
    Pair p = setup(tree, mode);
    std::vector<const Simulator*> others;
    for (const auto& o : p.others) others.push_back(o.get());
    Exploration stats;
    report.results.push_back(compare_runs(*p.reference, others, horizon, p.compare, &stats));
    report.states += stats.states;
    report.transitions += stats.transitions;
    ++report.trees;
  }
  return report;
}

DiffReport diff_encodings(const Corpus& corpus, DiffMode mode) {
  if (mode != DiffMode::Flavors && mode != DiffMode::Btc)
    return diff_trees(enumerate(corpus), mode, corpus.horizon);
  // BtCompiler semantics has no synchronized parallels.
  Corpus c = corpus;
  std::erase_if(c.kinds, [](CorpusKind k) {
    return k == CorpusKind::SyncParallelOne || k == CorpusKind::SyncParallelAll;
  });
  return diff_trees(enumerate(c), mode, c.horizon);
}

bool replays(const Diverged& d, DiffMode mode) {
  // For BTC the stored tree is already the binarized one.
  Pair p = setup(*d.tree, mode == DiffMode::Btc ? DiffMode::Flavors : mode);
  if (mode == DiffMode::Btc) {
    p.reference = make_interpreter(*d.tree, interp::SemanticsFlavor::BtCompiler);
    p.others.clear();
    p.others.push_back(make_btc(*d.tree));
    p.others.push_back(make_plan(*d.tree, plan::build(*d.tree, plan::Family::Btc)));
    p.compare = Compare::Statuses;
  }
  ReplayOracle replay(d.oracle);
  for (int t = 1; t <= d.tick; ++t) {
    const TickTrace expected = p.reference->tick(replay);
    for (auto& o : p.others) {
      std::optional<std::string> diff;
      const bool renamed = !(o->tree() == *d.tree);
      try {
        TickTrace actual;
        if (renamed) {
          RenamingOracle rename(*d.tree, o->tree(), replay);
          actual = o->tick(rename);
        } else {
          actual = o->tick(replay);
        }
        diff = compare_traces(*d.tree, expected, actual, renamed ? Compare::Root : p.compare);
      } catch (const OracleError&) {
        diff = "executed";
      }
      if (diff) return t == d.tick;
    }
  }
  return false;
}

}  // namespace btv::verify
