#pragma once

#include <vector>

#include "btv/tree.hpp"

namespace btv {

enum class BinarizeTarget {
  Generic,  // keep parallel flavors as declared
  Btc,      // every parallel must use the threshold definition
};

/// Rewrites every composite with k > 2 children as a right-leaning chain of
/// k - 1 binary copies. Single-child composites are replaced by their child.
///
/// Parallel thresholds are carried per layer: a success-on-one parallel stays
/// success-on-one at every layer, a success-on-all parallel becomes
/// success-on-all (threshold 2) at every layer. Any other threshold has no
/// equivalent chain and is rejected with ValidationError, as is a PyTrees
/// parallel when targeting the BTC encoding.
Tree binarize(const Tree& tree, BinarizeTarget target = BinarizeTarget::Generic);

bool is_binary(const Tree& tree);

/// Returns a copy in which every parallel uses the given flavor.
Tree with_parallel_flavor(const Tree& tree, ParallelFlavor flavor);

struct ResumeDomain {
  /// Distinct places a memory node can resume from, in pre-order.
  std::vector<NodeId> resume_points;
  /// Size of the naive encoding: product of child counts over every memory
  /// composite in the subtree.
  long long lazy_cardinality = 0;

  std::size_t cardinality() const { return resume_points.size(); }
};

/// Minimized resume-state domain of a selector or sequence with memory.
///
/// A running leaf L determines the resume configuration of the whole memory
/// chain above it: walk down from `node` towards L while the current node is a
/// memory selector/sequence; the child reached when the chain stops is the
/// resume point. Only subtrees containing a leaf that can return Running
/// contribute. The "not resuming" state is implicit and not counted.
ResumeDomain memory_resume_domain(const Tree& tree, NodeId node);

}  // namespace btv
