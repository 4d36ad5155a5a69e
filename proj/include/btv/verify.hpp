#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "btv/benchgen.hpp"
#include "btv/interp.hpp"
#include "btv/oracle.hpp"
#include "btv/trace.hpp"
#include "btv/tree.hpp"

namespace btv::plan {
struct Plan;
}

namespace btv::verify {

// ---------------------------------------------------------------------------
// Simulators behind one interface
// ---------------------------------------------------------------------------

/// What a temporal formula can observe at one position of a run. Total and
/// BTC runs have one frame per tick; Leaf runs have one frame per step plus
/// the closing absent-cursor step.
struct Frame {
  std::optional<NodeId> active_node;  // Leaf encoding cursor
  bool has_cursor = false;
  std::vector<Status> status;
  std::vector<bool> active;  // Total `active`, BTC `enable`
  std::vector<int> blackboard;
};

class Simulator {
 public:
  virtual ~Simulator() = default;
  virtual std::unique_ptr<Simulator> clone() const = 0;
  virtual std::string name() const = 0;
  virtual const Tree& tree() const = 0;
  /// Runs one tick; the oracle is keyed by this simulator's tree.
  virtual TickTrace tick(LeafOracle& oracle) = 0;
  /// Frames of the last tick.
  virtual std::vector<Frame> frames() const = 0;
  /// Packed state variables, used to detect revisited states.
  virtual std::string key() const = 0;
  virtual int tick_index() const = 0;
};

enum class Engine { Interpreter, Leaf, Total, Btc, Plan };

std::unique_ptr<Simulator> make_interpreter(const Tree& tree, interp::SemanticsFlavor flavor);
std::unique_ptr<Simulator> make_leaf(const Tree& tree);
std::unique_ptr<Simulator> make_total(const Tree& tree);
std::unique_ptr<Simulator> make_btc(const Tree& tree);
std::unique_ptr<Simulator> make_plan(const Tree& tree, const plan::Plan& plan);

/// Presents an oracle keyed by `source` leaf ids to a simulator running on
/// `target`; leaves are matched by name.
class RenamingOracle : public LeafOracle {
 public:
  RenamingOracle(const Tree& source, const Tree& target, LeafOracle& inner);
  Status leaf_status(int tick, int ordinal, NodeId leaf, StatusSet domain) override;
  int choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) override;

 private:
  std::vector<NodeId> map_;
  LeafOracle& inner_;
};

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct Holds {};

struct CounterexampleFound {
  OracleTable oracle;            // decisions for ticks 1..n
  std::vector<TickTrace> trace;  // one entry per tick
  int tick = 0;                  // 1-based tick where the property failed
  std::string description;
};

struct Diverged {
  std::shared_ptr<const Tree> tree;
  OracleTable oracle;
  int tick = 0;  // 1-based
  std::string field;
  std::string left;   // name of the reference side
  std::string right;  // name of the compared side
};

struct CheckResult {
  std::variant<Holds, CounterexampleFound, Diverged> verdict;

  bool holds() const { return std::holds_alternative<Holds>(verdict); }
  bool diverged() const { return std::holds_alternative<Diverged>(verdict); }
  std::string summary() const;
};

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

enum class CorpusKind {
  Selector,
  Sequence,
  SelectorMemory,
  SequenceMemory,
  ParallelOne,      // unsynchronized, threshold 1
  ParallelAll,      // unsynchronized, threshold = child count
  SyncParallelOne,
  SyncParallelAll,
};

enum class Wrapper { Inverter, RunningIsFailure, OneShot };

struct Corpus {
  int max_leaves = 5;
  std::vector<CorpusKind> kinds;
  /// Decorators that may wrap any non-root node; empty means none.
  std::vector<Wrapper> wrappers;
  std::vector<StatusSet> leaf_domains = {StatusSet::all()};
  ParallelFlavor parallel_flavor = ParallelFlavor::PyTrees;
  int horizon = 3;
  /// Refuse to enumerate more trees than this.
  std::size_t max_trees = 200000;

  static Corpus memoryless();   // criterion corpus: plain and synchronized parallels, <= 5 leaves
  static Corpus with_memory();  // adds memory selectors/sequences, <= 4 leaves
  static Corpus btc();          // kinds the BTC encoding supports, threshold parallels
};

std::vector<Tree> enumerate(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Differential testing
// ---------------------------------------------------------------------------

enum class Compare { Full, Statuses, Root };

struct Exploration {
  std::size_t states = 0;
  std::size_t transitions = 0;
};

/// Explores every decision sequence of `reference` up to `horizon` ticks,
/// replaying each one on `others`, merging states already seen. The
/// reference decides; a follower asking for an unrecorded decision diverges.
CheckResult compare_runs(const Simulator& reference,
                         const std::vector<const Simulator*>& others, int horizon,
                         Compare compare, Exploration* stats = nullptr);

enum class DiffMode {
  Encodings,  // Leaf and Total against the PyTrees interpreter
  Plans,      // Leaf, TotalV2 and TotalV3 plans against the PyTrees interpreter
  Btc,        // BTC and its plan against the BtCompiler interpreter on the binarized tree
  Flavors,    // PyTrees interpreter against BtCompiler interpreter
  Binarize,   // PyTrees interpreter on the tree against the binarized tree, root only
};

struct DiffReport {
  std::size_t trees = 0;
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::vector<CheckResult> results;  // one per tree, corpus order

  std::size_t divergences() const;
  const CheckResult* first_divergence() const;
};

DiffReport diff_encodings(const Corpus& corpus, DiffMode mode);
DiffReport diff_trees(const std::vector<Tree>& trees, DiffMode mode, int horizon);

/// Replays a divergence from its stored decisions; true if it reproduces.
bool replays(const Diverged& d, DiffMode mode);

// ---------------------------------------------------------------------------
// Restricted LTL templates
// ---------------------------------------------------------------------------

using bench::Dialect;
using bench::dialect_name;

namespace ltl {

enum class Cmp { Eq, Neq, Lt, Le, Gt, Ge };

struct Atom {
  std::string path;  // "node.field", "active_node" or "blackboard.var"
  Cmp cmp = Cmp::Eq;
  std::string literal;
};

struct Formula {
  enum class Op { Atom, Not, And, Or, Implies, Until, Globally, True, False };
  Op op = Op::True;
  Atom atom;
  std::vector<Formula> args;
};

/// Parses `G (...)` forms with !, &, |, ->, U and parentheses. An optional
/// leading LTLSPEC and trailing ';' are accepted.
Formula parse(const std::string& text);

/// Splits a spec file into formulas (one per LTLSPEC or per non-empty line).
std::vector<std::string> split_specs(const std::string& text);

std::string to_string(const Formula& f);

}  // namespace ltl

/// Bounded exhaustive check of a `G φ` template on a simulator.
CheckResult check_template_spec(const Simulator& sim, const ltl::Formula& spec, int horizon);

/// Simulator used for a dialect: Leaf cursor steps, Total ticks or BTC ticks.
std::unique_ptr<Simulator> simulator_for(const Tree& tree, Dialect dialect);

// ---------------------------------------------------------------------------
// Plans and external tools
// ---------------------------------------------------------------------------

/// Runs a plan for `ticks` ticks with the given decisions.
std::vector<TickTrace> interpret_plan(const Tree& tree, const plan::Plan& plan,
                                      LeafOracle& oracle, int ticks);

enum class SmokeStatus { Pass, Skip, Fail };

struct SmokeResult {
  SmokeStatus status = SmokeStatus::Skip;
  std::string output;
  /// Verdicts of check_ltlspec in file order (true = holds), when requested.
  std::vector<bool> verdicts;
};

/// Parses and builds `smv_file` with the executable named by BTVERIFY_NUXMV
/// (or `executable` when given). Skips when no executable is available.
SmokeResult nuxmv_smoke(const std::string& smv_file, bool check_specs = false,
                        std::optional<std::string> executable = std::nullopt);

/// Machine-readable summary of a diff report.
std::string report_json(const DiffReport& report, const std::string& label);

}  // namespace btv::verify
