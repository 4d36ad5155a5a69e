#include "btv/smv.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "btv/btc_encoding.hpp"
#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/version.hpp"

namespace btv::smv {

namespace {

using plan::DeclKind;
using plan::Expr;
using plan::Plan;
using plan::Scope;
using plan::Sort;
using plan::Symbol;
using plan::SymbolId;

struct Names {
  std::function<std::string(SymbolId)> symbol;
  std::function<std::string(NodeId)> node_id;
};

int precedence(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Not: return 7;
    case Expr::Op::Add: return 5;
    case Expr::Op::Eq:
    case Expr::Op::Neq:
    case Expr::Op::Lt:
    case Expr::Op::Ge: return 4;
    case Expr::Op::And: return 3;
    case Expr::Op::Or: return 2;
    default: return 9;
  }
}

std::string render(const Expr& e, const Names& names);

std::string operand(const Expr& e, int need, const Names& names) {
  std::string s = render(e, names);
  return precedence(e) < need ? "(" + s + ")" : s;
}

std::string join(const std::vector<Expr>& args, const std::string& sep, int need,
                 const Names& names) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += sep;
    out += operand(args[i], need, names);
  }
  return out;
}

std::string render(const Expr& e, const Names& names) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const:
      switch (e.sort) {
        case Sort::Kind::Bool: return e.value ? "TRUE" : "FALSE";
        case Sort::Kind::Status: return std::string(status_smv_name(static_cast<Status>(e.value)));
        case Sort::Kind::Range: return e.node ? names.node_id(*e.node) : std::to_string(e.value);
        case Sort::Kind::Enum: return e.label;
      }
      return "?";
    case Op::Ref: {
      const std::string n = names.symbol(e.symbol);
      return e.next ? "next(" + n + ")" : n;
    }
    case Op::Not: return "!" + operand(e.args[0], 8, names);
    case Op::And: return join(e.args, " & ", 3, names);
    case Op::Or: return join(e.args, " | ", 2, names);
    case Op::Eq: return operand(e.args[0], 5, names) + " = " + operand(e.args[1], 5, names);
    case Op::Neq: return operand(e.args[0], 5, names) + " != " + operand(e.args[1], 5, names);
    case Op::Lt: return operand(e.args[0], 5, names) + " < " + operand(e.args[1], 5, names);
    case Op::Ge: return operand(e.args[0], 5, names) + " >= " + operand(e.args[1], 5, names);
    case Op::Add: return operand(e.args[0], 5, names) + " + " + operand(e.args[1], 6, names);
    case Op::Count: return "count(" + join(e.args, ", ", 0, names) + ")";
    case Op::Case: {
      std::string out = "case ";
      for (std::size_t i = 0; i + 1 < e.args.size(); i += 2)
        out += render(e.args[i], names) + " : " + render(e.args[i + 1], names) + "; ";
      return out + "TRUE : " + render(e.args.back(), names) + "; esac";
    }
    case Op::SetChoice:
      if (e.args.size() == 1) return render(e.args[0], names);
      return "{" + join(e.args, ", ", 0, names) + "}";
  }
  return "?";
}

std::string sort_text(const Sort& s) {
  switch (s.kind) {
    case Sort::Kind::Bool: return "boolean";
    case Sort::Kind::Status: return "{invalid, running, success, failure}";
    case Sort::Kind::Range: return std::to_string(s.lo) + ".." + std::to_string(s.hi);
    case Sort::Kind::Enum: {
      std::string out = "{";
      for (std::size_t i = 0; i < s.labels.size(); ++i) out += (i ? ", " : "") + s.labels[i];
      return out + "}";
    }
  }
  return "?";
}

void visit(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  for (const auto& a : e.args) visit(a, f);
}

void visit_symbol(const Symbol& s, const std::function<void(const Expr&)>& f) {
  if (s.kind == DeclKind::State) {
    visit(s.init, f);
    visit(s.next, f);
  } else {
    visit(s.expr, f);
  }
}

// VAR / DEFINE / ASSIGN sections for a group of symbols. Extra variables
// follow the symbols' own.
std::string sections(const Plan& plan, const std::vector<SymbolId>& ids, const Names& names,
                     const std::vector<std::string>& extra_vars = {},
                     const std::vector<std::string>& extra_defines = {}) {
  std::ostringstream var, def, assign;
  for (const auto& d : extra_defines) def << "    " << d << ";\n";
  for (SymbolId id : ids) {
    const Symbol& s = plan[id];
    switch (s.kind) {
      case DeclKind::Define:
        def << "    " << s.name << " := " << render(s.expr, names) << ";\n";
        break;
      case DeclKind::State:
        var << "    " << s.name << " : " << sort_text(s.sort) << ";\n";
        assign << "    init(" << s.name << ") := " << render(s.init, names) << ";\n";
        assign << "    next(" << s.name << ") := " << render(s.next, names) << ";\n";
        break;
      case DeclKind::Chain:
        var << "    " << s.name << " : " << sort_text(s.sort) << ";\n";
        assign << "    init(" << s.name << ") := " << render(s.expr, names) << ";\n";
        assign << "    next(" << s.name << ") := " << render(plan::with_next(s.expr), names)
               << ";\n";
        break;
    }
  }
  for (const auto& v : extra_vars) var << "    " << v << ";\n";
  std::string out;
  if (!var.str().empty()) out += "  VAR\n" + var.str();
  if (!def.str().empty()) out += "  DEFINE\n" + def.str();
  if (!assign.str().empty()) out += "  ASSIGN\n" + assign.str();
  return out;
}

std::string module_base(const Tree& tree, NodeId n) {
  if (tree.is_leaf(n)) return "leaf";
  if (tree.is_selector(n)) return tree.is_memory_composite(n) ? "selector_memory" : "selector";
  if (tree.is_sequence(n)) return tree.is_memory_composite(n) ? "sequence_memory" : "sequence";
  if (tree.is_parallel(n)) return tree.is_synchronized_parallel(n) ? "parallel_sync" : "parallel";
  if (tree.is_oneshot(n)) return "oneshot";
  const auto& m = std::get<StatusMap>(tree.decorator_of(n).kind);
  if (m == StatusMap::inverter()) return "inverter";
  if (m == StatusMap::running_is_failure()) return "running_is_failure";
  return "decorator";
}

// How a module refers to another node. The rank orders parameters.
struct Relation {
  int rank = 0;
  int index = 0;
  std::string name;
  bool operator<(const Relation& o) const { return std::tie(rank, index) < std::tie(o.rank, o.index); }
};

Relation relation(const Tree& tree, NodeId self, NodeId other) {
  const Node& s = tree.node(self);
  const Node& o = tree.node(other);
  if (s.parent == other) return {0, 0, "parent"};
  const int k = static_cast<int>(o.child_index) + 1;
  if (o.parent == self) return {1, k, "child" + std::to_string(k)};
  if (o.parent && o.parent == s.parent) return {2, k, "sibling" + std::to_string(k)};
  if (tree.in_subtree(other, self)) {
    const auto anc = tree.ancestors(self);
    const int d = static_cast<int>(std::find(anc.begin(), anc.end(), other) - anc.begin()) + 1;
    return {3, d, "ancestor" + std::to_string(d)};
  }
  if (tree.in_subtree(self, other)) {
    const int d = static_cast<int>(other.value - self.value);
    return {4, d, "descendant" + std::to_string(d)};
  }
  const int d = static_cast<int>(other.value) - static_cast<int>(self.value);
  return {5, d, "node" + std::string(d < 0 ? "_m" : "_p") + std::to_string(std::abs(d))};
}

struct Instance {
  std::string name;
  std::string module;
  std::vector<std::string> args;
};

class Emitter {
 public:
  Emitter(const Tree& tree, const Plan& plan) : tree_(tree), plan_(plan) {
    if (plan.status.size() != tree.size()) throw Error("plan does not belong to this tree");
    owned_.resize(tree.size());
    for (std::size_t i = 0; i < plan.symbols.size(); ++i) {
      const Symbol& s = plan.symbols[i];
      const auto id = static_cast<SymbolId>(i);
      if (s.scope == Scope::Main) main_.push_back(id);
      else if (s.scope == Scope::Blackboard) board_.push_back(id);
      else owned_[s.owner->index()].push_back(id);
      visit_symbol(s, [&](const Expr& e) {
        if (e.op == Expr::Op::Const && e.node) needs_id_.insert(*e.node);
      });
    }
  }

  std::string modules_and_instances() {
    for (const Node& node : tree_.nodes()) build_module(node.id);
    std::string out;
    for (const auto& m : module_texts_) out += m + "\n";
    return out;
  }

  std::string blackboard_module() const {
    std::set<NodeId> nodes;
    std::set<SymbolId> mains;
    for (SymbolId id : board_)
      visit_symbol(plan_[id], [&](const Expr& e) {
        if (e.op != Expr::Op::Ref) return;
        const Symbol& t = plan_[e.symbol];
        if (t.scope == Scope::Node) nodes.insert(*t.owner);
        if (t.scope == Scope::Main) mains.insert(e.symbol);
      });
    std::vector<std::string> params;
    for (SymbolId m : mains) params.push_back(plan_[m].name);
    for (NodeId n : nodes) params.push_back(tree_.name(n));
    board_params_ = params;
    std::string head = "MODULE blackboard_module";
    if (!params.empty()) head += "(" + join_names(params) + ")";
    return head + "\n" + sections(plan_, board_, global_names());
  }

  std::string blackboard_arguments() const {
    blackboard_module();
    return board_params_.empty() ? "" : "(" + join_names(board_params_) + ")";
  }

  std::string main_module(bool with_blackboard) const {
    std::vector<std::string> vars;
    for (const auto& inst : instances_) {
      std::string v = inst.name + " : " + inst.module;
      if (!inst.args.empty()) v += "(" + join_names(inst.args) + ")";
      vars.push_back(v);
    }
    if (with_blackboard) vars.push_back("blackboard : blackboard_module" + blackboard_arguments());
    const std::string body = sections(plan_, main_, global_names(), vars);
    return "MODULE main\n" + body;
  }

 private:
  static std::string join_names(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
  }

  // Names as seen from main and from the blackboard module.
  Names global_names() const {
    return {[this](SymbolId id) {
              const Symbol& s = plan_[id];
              if (s.scope == Scope::Node) return tree_.name(*s.owner) + "." + s.name;
              return s.name;
            },
            [](NodeId n) { return std::to_string(n.value); }};
  }

  void build_module(NodeId n) {
    std::map<NodeId, Relation> others;
    std::set<SymbolId> mains;
    bool board = false;
    for (SymbolId id : owned_[n.index()])
      visit_symbol(plan_[id], [&](const Expr& e) {
        if (e.op == Expr::Op::Const && e.node && *e.node != n)
          others.emplace(*e.node, relation(tree_, n, *e.node));
        if (e.op != Expr::Op::Ref) return;
        const Symbol& t = plan_[e.symbol];
        if (t.scope == Scope::Main) mains.insert(e.symbol);
        else if (t.scope == Scope::Blackboard) board = true;
        else if (*t.owner != n) others.emplace(*t.owner, relation(tree_, n, *t.owner));
      });

    std::vector<std::pair<Relation, NodeId>> ordered;
    for (const auto& [m, r] : others) ordered.emplace_back(r, m);
    std::sort(ordered.begin(), ordered.end());

    std::vector<std::string> params;
    Instance inst;
    inst.name = tree_.name(n);
    const bool id = needs_id_.count(n) > 0;
    if (id) {
      params.push_back("id");
      inst.args.push_back(std::to_string(n.value));
    }
    for (const auto& [r, m] : ordered) {
      params.push_back(r.name);
      inst.args.push_back(tree_.name(m));
    }
    for (SymbolId m : mains) {
      params.push_back(plan_[m].name);
      inst.args.push_back(plan_[m].name);
    }
    if (board) {
      params.push_back("blackboard");
      inst.args.push_back("blackboard");
    }

    const Names names{[&](SymbolId sid) {
                        const Symbol& s = plan_[sid];
                        if (s.scope == Scope::Main) return s.name;
                        if (s.scope == Scope::Blackboard) return "blackboard." + s.name;
                        if (*s.owner == n) return s.name;
                        return others.at(*s.owner).name + "." + s.name;
                      },
                      [&](NodeId m) {
                        return m == n ? std::string("node_id") : others.at(m).name + ".node_id";
                      }};
    std::vector<std::string> defines;
    if (id) defines.push_back("node_id := id");
    std::string body = params.empty() ? "" : "(" + join_names(params) + ")";
    body += "\n" + sections(plan_, owned_[n.index()], names, {}, defines);

    auto it = module_names_.find(body);
    if (it == module_names_.end()) {
      const std::string base = "bt_" + module_base(tree_, n);
      const int k = ++variants_[base];
      const std::string name = k == 1 ? base : base + "_" + std::to_string(k);
      it = module_names_.emplace(body, name).first;
      module_texts_.push_back("MODULE " + name + body);
    }
    inst.module = it->second;
    instances_.push_back(std::move(inst));
  }

  const Tree& tree_;
  const Plan& plan_;
  std::vector<std::vector<SymbolId>> owned_;
  std::vector<SymbolId> main_;
  std::vector<SymbolId> board_;
  std::set<NodeId> needs_id_;
  std::map<std::string, std::string> module_names_;
  std::map<std::string, int> variants_;
  std::vector<std::string> module_texts_;
  std::vector<Instance> instances_;
  mutable std::vector<std::string> board_params_;
};

void check_options(const Tree& tree, const Plan& plan, const EmitOptions& options) {
  if (plan.family == plan::Family::Btc &&
      (!tree.blackboard().empty() || options.blackboard_mode != BlackboardMode::Generate))
    throw UnsupportedError(btc::kBlackboardUnsupported);
  if (options.blackboard_mode != BlackboardMode::Generate && options.blackboard_path.empty())
    throw Error("blackboard mode needs a file path");
}

std::string ensure_newline(std::string s) {
  if (!s.empty() && s.back() != '\n') s += '\n';
  return s;
}

}  // namespace

std::string blackboard_module(const Tree& tree, const Plan& plan) {
  return Emitter(tree, plan).blackboard_module();
}

std::string blackboard_arguments(const Tree& tree, const Plan& plan) {
  return Emitter(tree, plan).blackboard_arguments();
}

std::string emit(const Tree& tree, const Plan& plan, const EmitOptions& options) {
  check_options(tree, plan, options);
  Emitter em(tree, plan);
  std::string out = "-- btverify " + std::string(kVersion) + "\n";
  out += "-- encoding: " + plan::family_name(plan.family) + "\n\n";
  out += em.modules_and_instances();

  const bool board = !tree.blackboard().empty() || options.blackboard_mode != BlackboardMode::Generate;
  if (board) {
    std::string text;
    if (options.blackboard_mode == BlackboardMode::IncludeFile) {
      text = dsl::read_file(options.blackboard_path);
    } else {
      text = em.blackboard_module();
      if (options.blackboard_mode == BlackboardMode::GenerateAndSave)
        write_file(options.blackboard_path, text);
    }
    out += ensure_newline(text) + "\n";
  }
  out += em.main_module(board);
  if (options.spec_file) out += "\n" + ensure_newline(dsl::read_file(*options.spec_file));
  if (options.spec_text) out += "\n" + ensure_newline(*options.spec_text);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("cannot write '" + path + "'");
}

}  // namespace btv::smv
