#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "btv/error.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

namespace ltl {

namespace {

struct Token {
  enum class Kind { Ident, Number, Op, End } kind = Kind::End;
  std::string text;
  std::size_t pos = 0;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == '.'))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = s.substr(i, j - i);
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])) &&
                !out.empty() && out.back().kind == Token::Kind::Op && out.back().text != ")")) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Kind::Number;
      t.text = s.substr(i, j - i);
      i = j;
    } else {
      static const char* two[] = {"->", "!=", "<=", ">="};
      t.kind = Token::Kind::Op;
      for (const char* op : two)
        if (s.compare(i, 2, op) == 0) t.text = op;
      if (t.text.empty()) {
        if (std::string("!&|()=<>;").find(c) == std::string::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", 1,
                           static_cast<int>(i) + 1);
        t.text = std::string(1, c);
      }
      i += t.text.size();
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(lex(text)) {}

  Formula run() {
    if (peek_ident("LTLSPEC")) ++at_;
    Formula f = implies();
    if (peek_op(";")) ++at_;
    if (cur().kind != Token::Kind::End) fail("unexpected '" + cur().text + "'");
    return f;
  }

 private:
  const Token& cur() const { return tokens_[at_]; }
  bool peek_op(const char* op) const { return cur().kind == Token::Kind::Op && cur().text == op; }
  bool peek_ident(const char* id) const {
    return cur().kind == Token::Kind::Ident && cur().text == id;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(cur().pos) + 1);
  }
  void expect(const char* op) {
    if (!peek_op(op)) fail(std::string("expected '") + op + "'");
    ++at_;
  }

  static Formula node(Formula::Op op, std::vector<Formula> args) {
    Formula f;
    f.op = op;
    f.args = std::move(args);
    return f;
  }

  Formula implies() {
    Formula lhs = disjunction();
    if (!peek_op("->")) return lhs;
    ++at_;
    return node(Formula::Op::Implies, {std::move(lhs), implies()});
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek_op("|")) {
      ++at_;
      f = node(Formula::Op::Or, {std::move(f), conjunction()});
    }
    return f;
  }

  Formula conjunction() {
    Formula f = until();
    while (peek_op("&")) {
      ++at_;
      f = node(Formula::Op::And, {std::move(f), until()});
    }
    return f;
  }

  Formula until() {
    Formula lhs = unary();
    if (!peek_ident("U")) return lhs;
    ++at_;
    return node(Formula::Op::Until, {std::move(lhs), until()});
  }

  Formula unary() {
    if (peek_op("!")) {
      ++at_;
      return node(Formula::Op::Not, {unary()});
    }
    if (peek_op("(")) {
      ++at_;
      Formula f = implies();
      expect(")");
      return f;
    }
    if (cur().kind != Token::Kind::Ident) fail("expected a formula");
    const std::string id = cur().text;
    if (id == "G") {
      ++at_;
      return node(Formula::Op::Globally, {unary()});
    }
    if (id == "F" || id == "X" || id == "V" || id == "Y" || id == "H" || id == "O")
      throw UnsupportedError("temporal operator '" + id + "' is outside the supported templates");
    ++at_;
    if (!is_cmp()) {
      if (id == "TRUE") return node(Formula::Op::True, {});
      if (id == "FALSE") return node(Formula::Op::False, {});
      fail("expected a comparison after '" + id + "'");
    }
    Formula f;
    f.op = Formula::Op::Atom;
    f.atom.path = id;
    f.atom.cmp = cmp();
    if (cur().kind != Token::Kind::Ident && cur().kind != Token::Kind::Number) fail("expected a value");
    f.atom.literal = cur().text;
    ++at_;
    return f;
  }

  bool is_cmp() const {
    return peek_op("=") || peek_op("!=") || peek_op("<") || peek_op("<=") || peek_op(">") ||
           peek_op(">=");
  }

  Cmp cmp() {
    const std::string op = cur().text;
    ++at_;
    if (op == "=") return Cmp::Eq;
    if (op == "!=") return Cmp::Neq;
    if (op == "<") return Cmp::Lt;
    if (op == "<=") return Cmp::Le;
    if (op == ">") return Cmp::Gt;
    return Cmp::Ge;
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

const char* cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Eq: return "=";
    case Cmp::Neq: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

}  // namespace

Formula parse(const std::string& text) { return Parser(text).run(); }

std::vector<std::string> split_specs(const std::string& text) {
  // Drop comments, then cut at LTLSPEC keywords; without any, one spec per line.
  std::string clean;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t eol = std::min(text.find('\n', i), text.size());
    std::string line = text.substr(i, eol - i);
    if (const auto c = line.find("--"); c != std::string::npos) line.erase(c);
    clean += line + "\n";
    i = eol + 1;
  }
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n;");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r\n;");
    return s.substr(b, e - b + 1);
  };
  std::vector<std::string> out;
  const std::string kw = "LTLSPEC";
  if (clean.find(kw) == std::string::npos) {
    std::size_t at = 0;
    while (at < clean.size()) {
      const std::size_t eol = clean.find('\n', at);
      std::string s = trim(clean.substr(at, eol - at));
      if (!s.empty()) out.push_back(s);
      at = eol + 1;
    }
    return out;
  }
  std::size_t at = clean.find(kw);
  while (at != std::string::npos) {
    const std::size_t next = clean.find(kw, at + kw.size());
    std::string s = trim(clean.substr(at + kw.size(), next == std::string::npos ? std::string::npos
                                                                                 : next - at - kw.size()));
    if (!s.empty()) out.push_back(s);
    at = next;
  }
  return out;
}

namespace {

// Binary forms print their own parentheses.
std::string wrapped(const Formula& f) {
  const std::string body = to_string(f);
  const bool binary = f.op == Formula::Op::And || f.op == Formula::Op::Or ||
                      f.op == Formula::Op::Implies || f.op == Formula::Op::Until;
  return binary ? body : "(" + body + ")";
}

}  // namespace

std::string to_string(const Formula& f) {
  switch (f.op) {
    case Formula::Op::Atom: return f.atom.path + " " + cmp_text(f.atom.cmp) + " " + f.atom.literal;
    case Formula::Op::True: return "TRUE";
    case Formula::Op::False: return "FALSE";
    case Formula::Op::Not: return "!" + wrapped(f.args[0]);
    case Formula::Op::Globally: return "G " + wrapped(f.args[0]);
    case Formula::Op::And: return "(" + to_string(f.args[0]) + " & " + to_string(f.args[1]) + ")";
    case Formula::Op::Or: return "(" + to_string(f.args[0]) + " | " + to_string(f.args[1]) + ")";
    case Formula::Op::Implies:
      return "(" + to_string(f.args[0]) + " -> " + to_string(f.args[1]) + ")";
    case Formula::Op::Until: return "(" + to_string(f.args[0]) + " U " + to_string(f.args[1]) + ")";
  }
  return "?";
}

}  // namespace ltl

namespace {

using ltl::Cmp;
using ltl::Formula;

// Atom bound to a frame field of a concrete tree.
struct Probe {
  enum class Field { Status, Active, Cursor, Board } field = Field::Status;
  std::size_t index = 0;
  Cmp cmp = Cmp::Eq;
  int value = 0;
};

bool compare(int a, Cmp c, int b) {
  switch (c) {
    case Cmp::Eq: return a == b;
    case Cmp::Neq: return a != b;
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

int parse_int(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("'" + path + "' is compared with '" + s + "', which is not an integer");
}

int parse_bool(const std::string& s, const std::string& path) {
  if (s == "TRUE") return 1;
  if (s == "FALSE") return 0;
  throw Error("'" + path + "' is boolean but compared with '" + s + "'");
}

class Checker {
 public:
  Checker(const Simulator& sim, const Formula& spec) : tree_(sim.tree()) {
    if (spec.op != Formula::Op::Globally)
      throw UnsupportedError("only G (...) templates can be checked; use the SMV output with nuXmv");
    body_ = spec.args[0];
    bind(body_);
  }
  // Probes are keyed by addresses inside body_.
  Checker(const Checker&) = delete;
  Checker& operator=(const Checker&) = delete;

  // Index of the first frame where the body fails, if any.
  std::optional<std::size_t> violation(const std::vector<Frame>& frames) const {
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (!eval(body_, frames, i)) return i;
    return std::nullopt;
  }

 private:
  void bind(const Formula& f) {
    if (f.op == Formula::Op::Globally)
      throw UnsupportedError("nested G is outside the supported templates");
    for (auto& a : f.args) bind(a);
    if (f.op != Formula::Op::Atom) return;
    Probe p;
    p.cmp = f.atom.cmp;
    const std::string& path = f.atom.path;
    const std::string& lit = f.atom.literal;
    if (path == "active_node") {
      p.field = Probe::Field::Cursor;
      p.value = parse_int(lit, path);
    } else if (path.rfind("blackboard.", 0) == 0) {
      const std::string var = path.substr(11);
      const auto v = tree_.find_variable(var);
      if (!v) throw Error("unknown blackboard variable '" + var + "'");
      p.field = Probe::Field::Board;
      p.index = *v;
      const Domain& d = tree_.blackboard()[*v].domain;
      if (std::holds_alternative<BoolDomain>(d)) {
        p.value = parse_bool(lit, path);
      } else if (std::holds_alternative<IntRange>(d)) {
        p.value = parse_int(lit, path);
      } else {
        const auto& labels = std::get<EnumDomain>(d).labels;
        const auto it = std::find(labels.begin(), labels.end(), lit);
        if (it == labels.end()) throw Error("'" + lit + "' is not a value of '" + var + "'");
        if (p.cmp != Cmp::Eq && p.cmp != Cmp::Neq) throw Error("enum '" + var + "' is not ordered");
        p.value = static_cast<int>(it - labels.begin());
      }
    } else {
      const auto dot = path.find('.');
      if (dot == std::string::npos) throw Error("unknown observable '" + path + "'");
      const std::string name = path.substr(0, dot);
      const std::string field = path.substr(dot + 1);
      const auto n = tree_.find(name);
      if (!n) throw Error("unknown node '" + name + "'");
      p.index = n->index();
      if (field == "status") {
        const auto s = parse_status(lit);
        if (!s) throw Error("'" + path + "' is a status but compared with '" + lit + "'");
        if (p.cmp != Cmp::Eq && p.cmp != Cmp::Neq) throw Error("statuses are not ordered");
        p.field = Probe::Field::Status;
        p.value = static_cast<int>(*s);
      } else if (field == "active" || field == "enable") {
        p.field = Probe::Field::Active;
        p.value = parse_bool(lit, path);
      } else {
        throw Error("unknown field '" + field + "' of node '" + name + "'");
      }
    }
    probes_.emplace(&f, p);
  }

  bool atom(const Formula& f, const Frame& fr) const {
    const Probe& p = probes_.at(&f);
    int v = 0;
    switch (p.field) {
      case Probe::Field::Status: v = static_cast<int>(fr.status[p.index]); break;
      case Probe::Field::Active:
        if (fr.has_cursor) throw Error("'" + f.atom.path + "' is not an observable of this encoding");
        v = fr.active[p.index];
        break;
      case Probe::Field::Cursor:
        if (!fr.has_cursor) throw Error("active_node is only observable in the Leaf encoding");
        v = fr.active_node ? static_cast<int>(fr.active_node->value) : -1;
        break;
      case Probe::Field::Board: v = fr.blackboard[p.index]; break;
    }
    return compare(v, p.cmp, p.value);
  }

  bool eval(const Formula& f, const std::vector<Frame>& fr, std::size_t i) const {
    switch (f.op) {
      case Formula::Op::Atom: return atom(f, fr[i]);
      case Formula::Op::True: return true;
      case Formula::Op::False: return false;
      case Formula::Op::Not: return !eval(f.args[0], fr, i);
      case Formula::Op::And: return eval(f.args[0], fr, i) && eval(f.args[1], fr, i);
      case Formula::Op::Or: return eval(f.args[0], fr, i) || eval(f.args[1], fr, i);
      case Formula::Op::Implies: return !eval(f.args[0], fr, i) || eval(f.args[1], fr, i);
      case Formula::Op::Until:
        for (std::size_t j = i; j < fr.size(); ++j) {
          if (eval(f.args[1], fr, j)) return true;
          if (!eval(f.args[0], fr, j)) return false;
        }
        throw UnsupportedError("until is not resolved within the tick");
      case Formula::Op::Globally: break;
    }
    throw UnsupportedError("nested G is outside the supported templates");
  }

  const Tree& tree_;
  Formula body_;
  std::unordered_map<const Formula*, Probe> probes_;
};

struct Node {
  std::unique_ptr<Simulator> sim;
  std::size_t parent = 0;
  OracleTable decisions;
};

}  // namespace

CheckResult check_template_spec(const Simulator& sim, const ltl::Formula& spec, int horizon) {
  if (horizon < 1) throw Error("horizon must be at least 1");
  const Checker checker(sim, spec);
  std::vector<Node> nodes;
  nodes.push_back({sim.clone(), 0, {}});
  std::unordered_set<std::string> seen{nodes[0].sim->key()};
  std::size_t begin = 0;
  for (int depth = 0; depth < horizon && begin < nodes.size(); ++depth) {
    const std::size_t end = nodes.size();
    for (std::size_t v = begin; v < end; ++v) {
      EnumeratingOracle decide;
      do {
        auto next = nodes[v].sim->clone();
        next->tick(decide);
        const auto frames = next->frames();
        if (const auto at = checker.violation(frames)) {
          OracleTable all = decide.table();
          for (std::size_t i = v; i != 0; i = nodes[i].parent) all.merge(nodes[i].decisions);
          CounterexampleFound cx;
          cx.oracle = all;
          cx.tick = depth + 1;
          ReplayOracle replay(all);
          auto again = sim.clone();
          for (int t = 0; t <= depth; ++t) cx.trace.push_back(again->tick(replay));
          cx.description = ltl::to_string(spec) + " fails at step " + std::to_string(*at + 1) +
                           " of the tick; decisions: " + all.describe(sim.tree());
          return CheckResult{std::move(cx)};
        }
        if (seen.insert(next->key()).second) nodes.push_back({std::move(next), v, decide.table()});
      } while (decide.advance());
    }
    begin = end;
  }
  return CheckResult{Holds{}};
}

}  // namespace btv::verify
