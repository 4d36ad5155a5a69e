#include <map>

#include "btv/error.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

Corpus Corpus::memoryless() {
  Corpus c;
  c.max_leaves = 5;
  c.kinds = {CorpusKind::Selector,        CorpusKind::Sequence,       CorpusKind::ParallelOne,
             CorpusKind::ParallelAll,     CorpusKind::SyncParallelOne, CorpusKind::SyncParallelAll};
  return c;
}

Corpus Corpus::with_memory() {
  Corpus c;
  c.max_leaves = 4;
  c.kinds = {CorpusKind::Selector,       CorpusKind::Sequence,        CorpusKind::SelectorMemory,
             CorpusKind::SequenceMemory, CorpusKind::ParallelOne,     CorpusKind::ParallelAll,
             CorpusKind::SyncParallelOne, CorpusKind::SyncParallelAll};
  return c;
}

Corpus Corpus::btc() {
  Corpus c;
  c.max_leaves = 4;
  c.kinds = {CorpusKind::Selector,       CorpusKind::Sequence,    CorpusKind::SelectorMemory,
             CorpusKind::SequenceMemory, CorpusKind::ParallelOne, CorpusKind::ParallelAll};
  c.parallel_flavor = ParallelFlavor::Threshold;
  return c;
}

namespace {

// Ordered tree shape; internal nodes have at least two children.
struct Shape {
  std::vector<Shape> children;
};

class ShapeTable {
 public:
  const std::vector<Shape>& with_leaves(int leaves) {
    auto it = memo_.find(leaves);
    if (it != memo_.end()) return it->second;
    std::vector<Shape> out;
    if (leaves == 1) out.push_back(Shape{});
    std::vector<Shape> prefix;
    compose(leaves, 0, prefix, out);
    return memo_.emplace(leaves, std::move(out)).first->second;
  }

 private:
  // Splits `remaining` leaves over an ordered list of at least two subtrees.
  void compose(int remaining, int parts, std::vector<Shape>& prefix, std::vector<Shape>& out) {
    if (remaining == 0) {
      if (parts >= 2) out.push_back(Shape{prefix});
      return;
    }
    for (int first = 1; first <= remaining; ++first) {
      if (parts == 0 && first == remaining) continue;  // a single part is not a composite
      const std::vector<Shape> subs = with_leaves(first);
      for (const Shape& s : subs) {
        prefix.push_back(s);
        compose(remaining - first, parts + 1, prefix, out);
        prefix.pop_back();
      }
    }
  }

  std::map<int, std::vector<Shape>> memo_;
};

struct Slots {
  int internal = 0;
  int wrappable = 0;
  int leaves = 0;
};

void count_slots(const Shape& s, bool root, Slots& slots) {
  if (!root) ++slots.wrappable;
  if (s.children.empty()) {
    ++slots.leaves;
    return;
  }
  ++slots.internal;
  for (const Shape& c : s.children) count_slots(c, false, slots);
}

NodeKind composite_kind(CorpusKind k, int children, ParallelFlavor flavor) {
  switch (k) {
    case CorpusKind::Selector: return Selector{false};
    case CorpusKind::Sequence: return Sequence{false};
    case CorpusKind::SelectorMemory: return Selector{true};
    case CorpusKind::SequenceMemory: return Sequence{true};
    case CorpusKind::ParallelOne: return Parallel{false, {1, flavor}};
    case CorpusKind::ParallelAll: return Parallel{false, {children, flavor}};
    case CorpusKind::SyncParallelOne: return Parallel{true, {1, flavor}};
    case CorpusKind::SyncParallelAll: return Parallel{true, {children, flavor}};
  }
  return Selector{false};
}

class Builder {
 public:
  Builder(const Corpus& corpus, const std::vector<int>& kinds, const std::vector<int>& wraps,
          const std::vector<int>& domains)
      : corpus_(corpus), kinds_(kinds), wraps_(wraps), domains_(domains) {}

  NodeSpec build(const Shape& s, bool root) {
    NodeSpec spec;
    if (s.children.empty()) {
      spec = leaf(std::string(1, static_cast<char>('a' + leaf_)),
                  corpus_.leaf_domains[static_cast<std::size_t>(domains_[leaf_])]);
      ++leaf_;
    } else {
      const CorpusKind k = corpus_.kinds[static_cast<std::size_t>(kinds_[internal_])];
      spec.name = "n" + std::to_string(internal_);
      ++internal_;
      spec.kind = composite_kind(k, static_cast<int>(s.children.size()), corpus_.parallel_flavor);
      for (const Shape& c : s.children) spec.children.push_back(build(c, false));
    }
    if (root) return spec;
    const int w = wraps_[wrap_];
    const std::string wname = "w" + std::to_string(wrap_);
    ++wrap_;
    if (w == 0) return spec;
    switch (corpus_.wrappers[static_cast<std::size_t>(w - 1)]) {
      case Wrapper::Inverter: return decorator(wname, StatusMap::inverter(), std::move(spec));
      case Wrapper::RunningIsFailure:
        return decorator(wname, StatusMap::running_is_failure(), std::move(spec));
      case Wrapper::OneShot: return oneshot(wname, std::move(spec));
    }
    return spec;
  }

 private:
  const Corpus& corpus_;
  const std::vector<int>& kinds_;
  const std::vector<int>& wraps_;
  const std::vector<int>& domains_;
  int leaf_ = 0;
  int internal_ = 0;
  int wrap_ = 0;
};

// Odometer over a mixed-radix counter; false when it wraps around.
bool increment(std::vector<int>& digits, int radix) {
  for (int& d : digits) {
    if (++d < radix) return true;
    d = 0;
  }
  return false;
}

}  // namespace

std::vector<Tree> enumerate(const Corpus& corpus) {
  if (corpus.kinds.empty() && corpus.max_leaves > 1)
    throw Error("corpus needs at least one composite kind");
  if (corpus.leaf_domains.empty()) throw Error("corpus needs at least one leaf domain");
  ShapeTable table;
  std::vector<Tree> out;
  const int n_kinds = static_cast<int>(corpus.kinds.size());
  const int n_wraps = static_cast<int>(corpus.wrappers.size()) + 1;
  const int n_domains = static_cast<int>(corpus.leaf_domains.size());
  for (int leaves = 1; leaves <= corpus.max_leaves; ++leaves) {
    for (const Shape& shape : table.with_leaves(leaves)) {
      Slots slots;
      count_slots(shape, true, slots);
      std::vector<int> kinds(static_cast<std::size_t>(slots.internal), 0);
      do {
        std::vector<int> wraps(static_cast<std::size_t>(slots.wrappable), 0);
        do {
          std::vector<int> domains(static_cast<std::size_t>(slots.leaves), 0);
          do {
            Builder b(corpus, kinds, wraps, domains);
            out.push_back(Tree::build(b.build(shape, true)));
            if (out.size() > corpus.max_trees)
              throw Error("corpus exceeds " + std::to_string(corpus.max_trees) + " trees");
          } while (increment(domains, n_domains));
        } while (increment(wraps, n_wraps));
      } while (increment(kinds, n_kinds));
    }
  }
  return out;
}

}  // namespace btv::verify
