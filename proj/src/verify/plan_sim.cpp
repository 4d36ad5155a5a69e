#include "btv/error.hpp"
#include "btv/plan.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

namespace {

class PlanSim : public Simulator {
 public:
  PlanSim(std::shared_ptr<const Tree> tree, std::shared_ptr<const plan::Plan> plan)
      : tree_(std::move(tree)), plan_(std::move(plan)), runner_(*tree_, *plan_) {}

  std::unique_ptr<Simulator> clone() const override { return std::make_unique<PlanSim>(*this); }
  std::string name() const override { return "plan/" + plan::family_name(plan_->family); }
  const Tree& tree() const override { return *tree_; }

  TickTrace tick(LeafOracle& oracle) override {
    frames_.clear();
    TickTrace trace = plan_->active_node ? cursor_tick(oracle) : whole_tick(oracle);
    ++tick_;
    return trace;
  }

  std::vector<Frame> frames() const override { return frames_; }
  std::string key() const override { return runner_.key(); }
  int tick_index() const override { return tick_; }

 private:
  Status status_of(std::size_t i) const {
    const auto s = plan_->status[i];
    return s ? static_cast<Status>(runner_.value(*s)) : Status::Invalid;
  }

  Frame frame() const {
    Frame f;
    const std::size_t n = tree_->size();
    f.status.resize(n);
    f.active.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.status[i] = status_of(i);
      const auto a = plan_->active[i];
      f.active[i] = a ? runner_.value(*a) != 0 : f.status[i] != Status::Invalid;
    }
    if (plan_->active_node) {
      f.has_cursor = true;
      const int c = runner_.value(*plan_->active_node);
      if (c >= 0) f.active_node = NodeId{static_cast<std::uint32_t>(c)};
    }
    for (plan::SymbolId s : plan_->blackboard) f.blackboard.push_back(runner_.value(s));
    return f;
  }

  std::vector<bool> skips() const {
    std::vector<bool> out(tree_->size(), false);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (const auto s = plan_->skip[i]) out[i] = runner_.value(*s) != 0;
    return out;
  }

  TickTrace whole_tick(LeafOracle& oracle) {
    runner_.step(oracle, tick_);
    Frame f = frame();
    TickTrace t;
    t.status = f.status;
    t.skipped = skips();
    for (NodeId leaf : tree_->leaves())
      if (t.status[leaf.index()] != Status::Invalid) t.executed.push_back(leaf);
    t.blackboard = f.blackboard;
    frames_.push_back(std::move(f));
    return t;
  }

  TickTrace cursor_tick(LeafOracle& oracle) {
    if (runner_.steps() == 0) runner_.step(oracle, tick_);
    if (runner_.value(*plan_->active_node) != -1)
      throw EncodingError("plan tick must start at an absent cursor");
    TickTrace t;
    t.status.assign(tree_->size(), Status::Invalid);
    const std::size_t limit = 2 * tree_->size() + 1;
    for (std::size_t steps = 0;; ++steps) {
      if (steps > limit)
        throw EncodingError("tick did not finish within " + std::to_string(limit) + " steps");
      runner_.step(oracle, tick_);
      if (steps == 0) t.skipped = skips();
      Frame f = frame();
      const auto cursor = f.active_node;
      frames_.push_back(f);
      if (!cursor) {
        t.blackboard = f.blackboard;
        break;
      }
      if (tree_->is_leaf(*cursor)) t.executed.push_back(*cursor);
      for (std::size_t i = 0; i < tree_->size(); ++i)
        if (f.status[i] != Status::Invalid) t.status[i] = f.status[i];
    }
    return t;
  }

  std::shared_ptr<const Tree> tree_;
  std::shared_ptr<const plan::Plan> plan_;
  plan::Runner runner_;
  std::vector<Frame> frames_;
  int tick_ = 0;
};

}  // namespace

std::unique_ptr<Simulator> make_plan(const Tree& tree, const plan::Plan& plan) {
  return std::make_unique<PlanSim>(std::make_shared<const Tree>(tree),
                                   std::make_shared<const plan::Plan>(plan));
}

std::vector<TickTrace> interpret_plan(const Tree& tree, const plan::Plan& plan,
                                      LeafOracle& oracle, int ticks) {
  auto sim = make_plan(tree, plan);
  std::vector<TickTrace> out;
  for (int t = 0; t < ticks; ++t) out.push_back(sim->tick(oracle));
  return out;
}

}  // namespace btv::verify
