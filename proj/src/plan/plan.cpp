#include "btv/plan.hpp"

#include <functional>

#include "btv/error.hpp"

namespace btv::plan {

Expr lit(bool b) {
  Expr e;
  e.value = b ? 1 : 0;
  e.sort = Sort::Kind::Bool;
  return e;
}

Expr lit(Status s) {
  Expr e;
  e.value = static_cast<int>(s);
  e.sort = Sort::Kind::Status;
  return e;
}

Expr lit_int(int v) {
  Expr e;
  e.value = v;
  e.sort = Sort::Kind::Range;
  return e;
}

Expr lit_node(NodeId n) {
  Expr e = lit_int(static_cast<int>(n.value));
  e.node = n;
  return e;
}

Expr lit_value(const Domain& d, int v) {
  if (std::holds_alternative<BoolDomain>(d)) return lit(v != 0);
  if (std::holds_alternative<IntRange>(d)) return lit_int(v);
  Expr e;
  e.value = v;
  e.sort = Sort::Kind::Enum;
  e.label = format_value(d, v);
  return e;
}

Expr ref(SymbolId s) {
  Expr e;
  e.op = Expr::Op::Ref;
  e.symbol = s;
  return e;
}

Expr next_ref(SymbolId s) {
  Expr e = ref(s);
  e.next = true;
  return e;
}

namespace {

Expr make(Expr::Op op, std::vector<Expr> args) {
  Expr e;
  e.op = op;
  e.args = std::move(args);
  return e;
}

bool is_const(const Expr& e, int v) {
  return e.op == Expr::Op::Const && e.sort == Sort::Kind::Bool && e.value == v;
}

}  // namespace

Expr op_not(Expr e) {
  if (e.op == Expr::Op::Const && e.sort == Sort::Kind::Bool) return lit(e.value == 0);
  return make(Expr::Op::Not, {std::move(e)});
}

// And/Or fold away boolean constants so generated text stays readable.
Expr op_and(std::vector<Expr> args) {
  std::vector<Expr> kept;
  for (auto& a : args) {
    if (is_const(a, 0)) return lit(false);
    if (!is_const(a, 1)) kept.push_back(std::move(a));
  }
  if (kept.empty()) return lit(true);
  if (kept.size() == 1) return std::move(kept.front());
  return make(Expr::Op::And, std::move(kept));
}

Expr op_or(std::vector<Expr> args) {
  std::vector<Expr> kept;
  for (auto& a : args) {
    if (is_const(a, 1)) return lit(true);
    if (!is_const(a, 0)) kept.push_back(std::move(a));
  }
  if (kept.empty()) return lit(false);
  if (kept.size() == 1) return std::move(kept.front());
  return make(Expr::Op::Or, std::move(kept));
}

Expr eq(Expr a, Expr b) { return make(Expr::Op::Eq, {std::move(a), std::move(b)}); }
Expr neq(Expr a, Expr b) { return make(Expr::Op::Neq, {std::move(a), std::move(b)}); }
Expr lt(Expr a, Expr b) { return make(Expr::Op::Lt, {std::move(a), std::move(b)}); }
Expr ge(Expr a, Expr b) { return make(Expr::Op::Ge, {std::move(a), std::move(b)}); }
Expr add(Expr a, Expr b) { return make(Expr::Op::Add, {std::move(a), std::move(b)}); }
Expr count(std::vector<Expr> args) { return make(Expr::Op::Count, std::move(args)); }

Expr case_of(std::vector<std::pair<Expr, Expr>> branches, Expr otherwise) {
  std::vector<Expr> args;
  for (auto& [c, v] : branches) {
    if (is_const(c, 0)) continue;
    if (is_const(c, 1)) {
      otherwise = std::move(v);
      break;
    }
    args.push_back(std::move(c));
    args.push_back(std::move(v));
  }
  if (args.empty()) return otherwise;
  args.push_back(std::move(otherwise));
  return make(Expr::Op::Case, std::move(args));
}

Expr choice(std::vector<Expr> values) { return make(Expr::Op::SetChoice, std::move(values)); }

Expr with_next(const Expr& e) {
  Expr out = e;
  if (out.op == Expr::Op::Ref) out.next = true;
  for (auto& a : out.args) a = with_next(a);
  return out;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Leaf: return "leaf";
    case Family::TotalV2: return "total-v2";
    case Family::TotalV3: return "total-v3";
    case Family::Btc: return "btc";
  }
  return "?";
}

SymbolId Plan::add(Symbol s) {
  symbols.push_back(std::move(s));
  return static_cast<SymbolId>(symbols.size() - 1);
}

std::optional<SymbolId> Plan::find(std::optional<NodeId> owner, std::string_view name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].owner == owner && symbols[i].name == name) return static_cast<SymbolId>(i);
  return std::nullopt;
}

int define_depth(const Plan& plan) {
  std::vector<int> depth(plan.symbols.size(), -1);
  std::function<int(SymbolId)> of;
  std::function<int(const Expr&)> deepest = [&](const Expr& e) {
    int d = 0;
    if (e.op == Expr::Op::Ref) d = of(e.symbol);
    for (const auto& a : e.args) d = std::max(d, deepest(a));
    return d;
  };
  of = [&](SymbolId s) {
    const Symbol& sym = plan.symbols[s];
    if (sym.kind != DeclKind::Define) return 0;
    if (depth[s] == -2) throw EncodingError("define '" + sym.name + "' depends on itself");
    if (depth[s] >= 0) return depth[s];
    depth[s] = -2;
    return depth[s] = 1 + deepest(sym.expr);
  };
  int best = 0;
  for (std::size_t i = 0; i < plan.symbols.size(); ++i)
    best = std::max(best, of(static_cast<SymbolId>(i)));
  return best;
}

Runner::Runner(const Tree& tree, const Plan& plan) : tree_(&tree), plan_(&plan) {}

void Runner::step(LeafOracle& oracle, int tick) {
  oracle_ = &oracle;
  if (tick != tick_) ordinal_ = 0;
  tick_ = tick;
  prev_ = std::move(cur_);
  cur_.assign(plan_->symbols.size(), 0);
  mark_.assign(plan_->symbols.size(), 0);
  for (std::size_t i = 0; i < plan_->symbols.size(); ++i) eval_symbol(static_cast<SymbolId>(i));
  ++steps_;
}

std::string Runner::key() const {
  std::string k;
  if (cur_.empty()) return k;
  for (std::size_t i = 0; i < plan_->symbols.size(); ++i) {
    if (plan_->symbols[i].kind != DeclKind::State) continue;
    const int v = cur_[i];
    k.append(reinterpret_cast<const char*>(&v), sizeof v);
  }
  return k;
}

int Runner::eval_symbol(SymbolId s) {
  if (mark_[s] == 2) return cur_[s];
  const Symbol& sym = plan_->symbols[s];
  if (mark_[s] == 1) throw EncodingError("symbol '" + sym.name + "' depends on itself");
  mark_[s] = 1;
  int v = 0;
  if (sym.kind == DeclKind::State) {
    v = steps_ == 0 ? eval(sym.init, false) : eval(sym.next, true);
  } else {
    v = eval(sym.expr, false);
  }
  if (sym.kind != DeclKind::Define && sym.sort.kind == Sort::Kind::Range &&
      (v < sym.sort.lo || v > sym.sort.hi))
    throw EncodingError("symbol '" + sym.name + "' left its range with value " + std::to_string(v));
  cur_[s] = v;
  mark_[s] = 2;
  return v;
}

int Runner::eval(const Expr& e, bool transition) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const: return e.value;
    case Op::Ref:
      if (transition && !e.next) return prev_[e.symbol];
      return eval_symbol(e.symbol);
    case Op::Not: return eval(e.args[0], transition) == 0;
    case Op::And:
      for (const auto& a : e.args)
        if (!eval(a, transition)) return 0;
      return 1;
    case Op::Or:
      for (const auto& a : e.args)
        if (eval(a, transition)) return 1;
      return 0;
    case Op::Eq: return eval(e.args[0], transition) == eval(e.args[1], transition);
    case Op::Neq: return eval(e.args[0], transition) != eval(e.args[1], transition);
    case Op::Lt: return eval(e.args[0], transition) < eval(e.args[1], transition);
    case Op::Ge: return eval(e.args[0], transition) >= eval(e.args[1], transition);
    case Op::Add: return eval(e.args[0], transition) + eval(e.args[1], transition);
    case Op::Count: {
      int n = 0;
      for (const auto& a : e.args) n += eval(a, transition) != 0;
      return n;
    }
    case Op::Case:
      for (std::size_t i = 0; i + 1 < e.args.size(); i += 2)
        if (eval(e.args[i], transition)) return eval(e.args[i + 1], transition);
      return eval(e.args.back(), transition);
    case Op::SetChoice: {
      if (e.leaf && !e.effect) {
        StatusSet domain;
        for (const auto& a : e.args) domain.insert(static_cast<Status>(a.value));
        const Status s = oracle_->leaf_status(tick_, ordinal_++, *e.leaf, domain);
        if (!domain.contains(s))
          throw OracleError("oracle returned a status outside the domain of leaf '" +
                            tree_->name(*e.leaf) + "'");
        return static_cast<int>(s);
      }
      if (e.leaf && e.effect) {
        const int i = oracle_->choose_value(tick_, *e.leaf, *e.effect,
                                            static_cast<int>(e.args.size()));
        if (i < 0 || i >= static_cast<int>(e.args.size()))
          throw OracleError("oracle chose a value outside the domain");
        return e.args[static_cast<std::size_t>(i)].value;
      }
      throw EncodingError("nondeterministic choice without a decision source");
    }
  }
  return 0;
}

}  // namespace btv::plan
