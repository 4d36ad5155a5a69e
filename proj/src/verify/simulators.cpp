#include "btv/btc_encoding.hpp"
#include "btv/error.hpp"
#include "btv/leaf_encoding.hpp"
#include "btv/total_encoding.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

namespace {

class InterpreterSim : public Simulator {
 public:
  InterpreterSim(std::shared_ptr<const Tree> tree, interp::SemanticsFlavor flavor)
      : tree_(std::move(tree)), flavor_(flavor), state_(interp::InterpState::initial(*tree_)) {}

  std::unique_ptr<Simulator> clone() const override {
    return std::make_unique<InterpreterSim>(*this);
  }
  std::string name() const override { return "interpreter/" + interp::flavor_name(flavor_); }
  const Tree& tree() const override { return *tree_; }
  TickTrace tick(LeafOracle& oracle) override {
    last_ = interp::tick(*tree_, state_, oracle, flavor_);
    return last_;
  }
  std::vector<Frame> frames() const override {
    Frame f;
    f.status = last_.status;
    f.active.resize(last_.status.size());
    for (std::size_t i = 0; i < f.active.size(); ++i)
      f.active[i] = last_.status[i] != Status::Invalid;
    f.blackboard = last_.blackboard;
    return {f};
  }
  std::string key() const override { return state_.key(); }
  int tick_index() const override { return state_.tick; }

 private:
  std::shared_ptr<const Tree> tree_;
  interp::SemanticsFlavor flavor_;
  interp::InterpState state_;
  TickTrace last_;
};

class LeafSim : public Simulator {
 public:
  explicit LeafSim(std::shared_ptr<const Tree> tree)
      : tree_(std::move(tree)), state_(leafenc::LeafState::initial(*tree_)) {}

  std::unique_ptr<Simulator> clone() const override { return std::make_unique<LeafSim>(*this); }
  std::string name() const override { return "leaf"; }
  const Tree& tree() const override { return *tree_; }
  TickTrace tick(LeafOracle& oracle) override {
    steps_.clear();
    return leafenc::run_tick_frames(*tree_, state_, oracle, steps_);
  }
  std::vector<Frame> frames() const override {
    std::vector<Frame> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) {
      Frame f;
      f.active_node = s.active;
      f.has_cursor = true;
      f.status = s.status;
      f.active.resize(s.status.size());
      for (std::size_t i = 0; i < f.active.size(); ++i)
        f.active[i] = s.status[i] != Status::Invalid;
      f.blackboard = s.blackboard;
      out.push_back(std::move(f));
    }
    return out;
  }
  std::string key() const override { return state_.key(); }
  int tick_index() const override { return state_.tick; }

 private:
  std::shared_ptr<const Tree> tree_;
  leafenc::LeafState state_;
  std::vector<leafenc::StepFrame> steps_;
};

class TotalSim : public Simulator {
 public:
  explicit TotalSim(std::shared_ptr<const Tree> tree)
      : tree_(std::move(tree)), state_(total::TotalState::initial(*tree_)) {}

  std::unique_ptr<Simulator> clone() const override { return std::make_unique<TotalSim>(*this); }
  std::string name() const override { return "total"; }
  const Tree& tree() const override { return *tree_; }
  TickTrace tick(LeafOracle& oracle) override {
    last_ = total::compute_tick(*tree_, state_, oracle);
    blackboard_ = state_.blackboard;
    return total::to_trace(last_, state_);
  }
  std::vector<Frame> frames() const override {
    Frame f;
    f.status = last_.status;
    f.active = last_.active;
    f.blackboard = blackboard_;
    return {f};
  }
  std::string key() const override { return state_.key(); }
  int tick_index() const override { return state_.tick; }

 private:
  std::shared_ptr<const Tree> tree_;
  total::TotalState state_;
  total::TotalTickResult last_;
  std::vector<int> blackboard_;
};

class BtcSim : public Simulator {
 public:
  explicit BtcSim(std::shared_ptr<const Tree> tree)
      : tree_(std::move(tree)), state_(btc::BtcState::initial(*tree_)) {
    btc::require_compatible(*tree_);
  }

  std::unique_ptr<Simulator> clone() const override { return std::make_unique<BtcSim>(*this); }
  std::string name() const override { return "btc"; }
  const Tree& tree() const override { return *tree_; }
  TickTrace tick(LeafOracle& oracle) override { return btc::btc_tick(*tree_, state_, oracle); }
  std::vector<Frame> frames() const override {
    Frame f;
    f.status = state_.status;
    f.active = state_.active;
    return {f};
  }
  std::string key() const override { return state_.key(); }
  int tick_index() const override { return state_.tick; }

 private:
  std::shared_ptr<const Tree> tree_;
  btc::BtcState state_;
};

}  // namespace

std::unique_ptr<Simulator> make_interpreter(const Tree& tree, interp::SemanticsFlavor flavor) {
  return std::make_unique<InterpreterSim>(std::make_shared<const Tree>(tree), flavor);
}

std::unique_ptr<Simulator> make_leaf(const Tree& tree) {
  return std::make_unique<LeafSim>(std::make_shared<const Tree>(tree));
}

std::unique_ptr<Simulator> make_total(const Tree& tree) {
  return std::make_unique<TotalSim>(std::make_shared<const Tree>(tree));
}

std::unique_ptr<Simulator> make_btc(const Tree& tree) {
  return std::make_unique<BtcSim>(std::make_shared<const Tree>(tree));
}

RenamingOracle::RenamingOracle(const Tree& source, const Tree& target, LeafOracle& inner)
    : map_(target.size()), inner_(inner) {
  for (NodeId leaf : target.leaves()) {
    const auto match = source.find(target.name(leaf));
    if (!match || !source.is_leaf(*match))
      throw Error("leaf '" + target.name(leaf) + "' has no counterpart");
    map_[leaf.index()] = *match;
  }
}

Status RenamingOracle::leaf_status(int tick, int ordinal, NodeId leaf, StatusSet domain) {
  return inner_.leaf_status(tick, ordinal, map_[leaf.index()], domain);
}

int RenamingOracle::choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) {
  return inner_.choose_value(tick, map_[leaf.index()], effect, domain_size);
}

std::unique_ptr<Simulator> simulator_for(const Tree& tree, Dialect dialect) {
  switch (dialect) {
    case Dialect::Leaf: return make_leaf(tree);
    case Dialect::Total: return make_total(tree);
    case Dialect::Btc: return make_btc(tree);
  }
  throw Error("unknown dialect");
}

}  // namespace btv::verify
