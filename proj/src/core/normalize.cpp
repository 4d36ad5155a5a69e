#include "btv/normalize.hpp"

#include <set>

#include "btv/error.hpp"
#include "btv/validate.hpp"

namespace btv {

namespace {

class Binarizer {
 public:
  Binarizer(const Tree& tree, BinarizeTarget target) : target_(target) {
    for (const Node& n : tree.nodes()) names_.insert(n.name);
  }

  NodeSpec run(const NodeSpec& spec) {
    if (std::holds_alternative<Leaf>(spec.kind)) return spec;
    NodeSpec out{spec.name, spec.kind, {}};
    for (const NodeSpec& c : spec.children) out.children.push_back(run(c));
    if (std::holds_alternative<Decorator>(spec.kind)) return out;

    const std::size_t k = out.children.size();
    if (k == 1) return std::move(out.children.front());

    NodeKind layer_kind = spec.kind;
    if (auto* par = std::get_if<Parallel>(&layer_kind)) {
      if (target_ == BinarizeTarget::Btc && par->policy.flavor == ParallelFlavor::PyTrees)
        throw ValidationError("parallel '" + spec.name +
                              "' uses the PyTrees definition; the BTC encoding requires the "
                              "threshold definition");
      if (target_ == BinarizeTarget::Btc && par->synchronized)
        throw ValidationError("parallel '" + spec.name +
                              "' is synchronized; the BTC encoding has no parallel memory");
      const int m = par->policy.threshold;
      if (k > 2) {
        if (m == 1) {
          par->policy.threshold = 1;
        } else if (m == static_cast<int>(k)) {
          par->policy.threshold = 2;
        } else {
          throw ValidationError("parallel '" + spec.name + "' has threshold " +
                                std::to_string(m) + " of " + std::to_string(k) +
                                "; only success-on-one and success-on-all survive "
                                "self-composition");
        }
      }
    }
    if (k == 2) {
      out.kind = layer_kind;
      return out;
    }

    // Right-leaning chain: name(c0, name_2(c1, name_3(c2, ... c_{k-1})))
    NodeSpec tail = std::move(out.children.back());
    for (std::size_t i = k - 1; i-- > 1;) {
      NodeSpec link{fresh_name(spec.name, i + 1), layer_kind, {}};
      link.children.push_back(std::move(out.children[i]));
      link.children.push_back(std::move(tail));
      tail = std::move(link);
    }
    NodeSpec top{spec.name, layer_kind, {}};
    top.children.push_back(std::move(out.children.front()));
    top.children.push_back(std::move(tail));
    return top;
  }

 private:
  std::string fresh_name(const std::string& base, std::size_t layer) {
    std::string candidate = base + "_" + std::to_string(layer);
    while (names_.count(candidate)) candidate += "_";
    names_.insert(candidate);
    return candidate;
  }

  BinarizeTarget target_;
  std::set<std::string> names_;
};

void set_flavor(NodeSpec& spec, ParallelFlavor flavor) {
  if (auto* par = std::get_if<Parallel>(&spec.kind)) par->policy.flavor = flavor;
  for (NodeSpec& c : spec.children) set_flavor(c, flavor);
}

bool can_run(const Tree& tree, NodeId n) {
  for (NodeId m = n; m < tree.node(n).subtree_end; m = NodeId{m.value + 1}) {
    if (tree.is_leaf(m) && tree.leaf_of(m).profile.status_domain.contains(Status::Running))
      return true;
  }
  return false;
}

void collect_resume_points(const Tree& tree, NodeId n, std::vector<NodeId>& out) {
  for (NodeId c : tree.children(n)) {
    if (!can_run(tree, c)) continue;
    if (tree.is_memory_composite(c)) {
      collect_resume_points(tree, c, out);
    } else {
      out.push_back(c);
    }
  }
}

}  // namespace

Tree binarize(const Tree& tree, BinarizeTarget target) {
  require_valid(tree);
  Binarizer b(tree, target);
  return Tree::build(b.run(tree.to_spec()), tree.blackboard());
}

bool is_binary(const Tree& tree) {
  for (const Node& n : tree.nodes())
    if (tree.is_composite(n.id) && n.children.size() != 2) return false;
  return true;
}

Tree with_parallel_flavor(const Tree& tree, ParallelFlavor flavor) {
  NodeSpec spec = tree.to_spec();
  set_flavor(spec, flavor);
  return Tree::build(spec, tree.blackboard());
}

ResumeDomain memory_resume_domain(const Tree& tree, NodeId node) {
  if (!tree.is_memory_composite(node))
    throw ValidationError("node '" + tree.name(node) +
                          "' is not a selector or sequence with memory");
  ResumeDomain out;
  collect_resume_points(tree, node, out.resume_points);
  out.lazy_cardinality = 1;
  for (NodeId m = node; m < tree.node(node).subtree_end; m = NodeId{m.value + 1}) {
    if (tree.is_memory_composite(m))
      out.lazy_cardinality *= static_cast<long long>(tree.children(m).size());
  }
  return out;
}

}  // namespace btv
