#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/validate.hpp"

namespace btv::dsl {

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
          t.text.push_back(take());
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        t.kind = Tok::Number;
        t.text.push_back(take());
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          t.text.push_back(take());
      } else if (c == '"') {
        t.kind = Tok::String;
        take();
        for (;;) {
          if (pos_ >= text_.size() || text_[pos_] == '\n')
            throw ParseError("unterminated string", t.line, t.column);
          char ch = take();
          if (ch == '"') break;
          if (ch == '\\') {
            if (pos_ >= text_.size()) throw ParseError("unterminated string", t.line, t.column);
            ch = take();
          }
          t.text.push_back(ch);
        }
      } else if (c == '.' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '.') {
        t.kind = Tok::Punct;
        t.text = "..";
        take();
        take();
      } else if (std::string_view("{}[]:,=").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text.push_back(take());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char take() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#' || (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        return;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string, std::less<>> kNodeKeywords = {
    "leaf", "selector", "sequence", "parallel", "inverter", "running_is_failure", "oneshot",
    "decorator"};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  TreeDocument run() {
    TreeDocument doc;
    std::vector<BlackboardDecl> bb;
    bool seen_format = false;
    for (;;) {
      if (peek_is("format")) {
        if (seen_format) fail("duplicate format line");
        seen_format = true;
        next();
        const Token v = expect_kind(Tok::Number, "format version");
        doc.format_version = std::stoi(v.text);
        if (doc.format_version != kFormatVersion)
          throw ParseError("unsupported format version " + v.text, v.line, v.column);
      } else if (peek_is("blackboard") && peek(1).text == "{") {
        next();
        next();
        while (!peek_punct("}")) bb.push_back(var_decl(bb));
        next();
      } else if (peek_is("include")) {
        next();
        const Token what = expect_kind(Tok::Ident, "'blackboard' or 'specs'");
        const Token path = expect_kind(Tok::String, "quoted path");
        if (what.text == "blackboard") {
          doc.blackboard_include = path.text;
        } else if (what.text == "specs") {
          doc.spec_include = path.text;
        } else {
          throw ParseError("expected 'blackboard' or 'specs', found '" + what.text + "'",
                           what.line, what.column);
        }
      } else {
        break;
      }
    }
    blackboard_ = &bb;
    NodeSpec root = node(true);
    if (peek().kind != Tok::End) fail("expected end of document");
    name_anonymous(root);
    doc.tree = Tree::build(root, bb);
    require_valid(doc.tree);
    return doc;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool peek_is(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }
  bool peek_punct(std::string_view p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(expected + ", found " + found, t.line, t.column);
  }

  Token expect_kind(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail("expected " + what);
    return next();
  }
  void expect(std::string_view p) {
    if (!peek_punct(p)) fail("expected '" + std::string(p) + "'");
    next();
  }
  int number() { return std::stoi(expect_kind(Tok::Number, "number").text); }

  BlackboardDecl var_decl(const std::vector<BlackboardDecl>& earlier) {
    const Token name = expect_kind(Tok::Ident, "variable name or '}'");
    for (const auto& d : earlier)
      if (d.name == name.text)
        throw ParseError("duplicate variable '" + name.text + "'", name.line, name.column);
    expect(":");
    BlackboardDecl decl;
    decl.name = name.text;
    const Token type = expect_kind(Tok::Ident, "'bool', 'int' or 'enum'");
    if (type.text == "bool") {
      decl.domain = BoolDomain{};
    } else if (type.text == "int") {
      expect("[");
      IntRange r;
      r.lo = number();
      expect("..");
      r.hi = number();
      expect("]");
      if (r.lo > r.hi) throw ParseError("empty integer range", type.line, type.column);
      decl.domain = r;
      decl.initial = r.lo;
    } else if (type.text == "enum") {
      expect("[");
      EnumDomain e;
      e.labels.push_back(expect_kind(Tok::Ident, "label").text);
      while (peek_punct(",")) {
        next();
        e.labels.push_back(expect_kind(Tok::Ident, "label").text);
      }
      expect("]");
      decl.domain = e;
    } else {
      throw ParseError("expected 'bool', 'int' or 'enum', found '" + type.text + "'", type.line,
                       type.column);
    }
    if (peek_punct("=")) {
      next();
      decl.initial = value(decl.domain, decl.name);
    }
    if (peek_punct(",")) next();
    return decl;
  }

  int value(const Domain& dom, const std::string& var) {
    const Token t = peek();
    if (std::holds_alternative<BoolDomain>(dom)) {
      if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
        next();
        return t.text == "true";
      }
      fail("expected true or false for '" + var + "'");
    }
    if (const auto* e = std::get_if<EnumDomain>(&dom)) {
      if (t.kind == Tok::Ident) {
        for (std::size_t i = 0; i < e->labels.size(); ++i)
          if (e->labels[i] == t.text) {
            next();
            return static_cast<int>(i);
          }
      }
      fail("expected a label of '" + var + "'");
    }
    const auto& r = std::get<IntRange>(dom);
    if (t.kind != Tok::Number) fail("expected an integer for '" + var + "'");
    const int v = std::stoi(t.text);
    if (v < r.lo || v > r.hi)
      throw ParseError("value " + t.text + " outside the range of '" + var + "'", t.line,
                       t.column);
    next();
    return v;
  }

  Status status(bool allow_invalid = false) {
    const Token t = expect_kind(Tok::Ident, "status");
    const auto s = parse_status(t.text);
    if (!s || (!allow_invalid && *s == Status::Invalid))
      throw ParseError("expected S, F or R, found '" + t.text + "'", t.line, t.column);
    return *s;
  }

  std::optional<Token> optional_name() {
    if (peek().kind == Tok::Ident && !kNodeKeywords.count(peek().text)) return next();
    return std::nullopt;
  }

  void record_name(NodeSpec& spec, const std::optional<Token>& name) {
    if (name) {
      spec.name = name->text;
      auto [it, fresh] = names_.emplace(name->text, *name);
      if (!fresh)
        throw ParseError("duplicate node name '" + name->text + "' (first at " +
                             std::to_string(it->second.line) + ":" +
                             std::to_string(it->second.column) + ")",
                         name->line, name->column);
    }
  }

  std::vector<NodeSpec> children(const Token& kw) {
    expect("{");
    std::vector<NodeSpec> out;
    while (!peek_punct("}")) {
      if (peek().kind == Tok::End) fail("expected '}' closing '" + kw.text + "'");
      out.push_back(node(false));
    }
    next();
    return out;
  }

  NodeSpec node(bool root) {
    const Token kw = peek();
    if (kw.kind != Tok::Ident) fail(root ? "expected a node" : "expected a node or '}'");
    next();
    NodeSpec spec;
    if (!kNodeKeywords.count(kw.text)) {
      if (root) {
        throw ParseError("unknown node kind '" + kw.text + "'", kw.line, kw.column);
      }
      spec = leaf(kw.text);
      record_name(spec, kw);
      return spec;
    }
    if (kw.text == "leaf") {
      const Token name = expect_kind(Tok::Ident, "leaf name");
      spec = leaf(name.text);
      if (peek_punct("{")) leaf_body(std::get<Leaf>(spec.kind).profile);
      record_name(spec, name);
      return spec;
    }
    if (kw.text == "selector" || kw.text == "sequence") {
      bool memory = false;
      if (peek_is("memory")) {
        next();
        memory = true;
      }
      const auto name = optional_name();
      spec.kind = kw.text == "selector" ? NodeKind{Selector{memory}} : NodeKind{Sequence{memory}};
      record_name(spec, name);
      spec.children = children(kw);
      return spec;
    }
    if (kw.text == "parallel") {
      Parallel par;
      bool threshold_given = false;
      for (;;) {
        if (peek_is("sync")) {
          next();
          par.synchronized = true;
        } else if (peek_is("threshold") && peek(1).text == "=") {
          next();
          next();
          par.policy.threshold = number();
          threshold_given = true;
        } else if (peek_is("flavor") && peek(1).text == "=") {
          next();
          next();
          const Token f = expect_kind(Tok::Ident, "'pytrees' or 'threshold'");
          if (f.text == "pytrees") {
            par.policy.flavor = ParallelFlavor::PyTrees;
          } else if (f.text == "threshold") {
            par.policy.flavor = ParallelFlavor::Threshold;
          } else {
            throw ParseError("expected 'pytrees' or 'threshold', found '" + f.text + "'",
                             f.line, f.column);
          }
        } else {
          break;
        }
      }
      const auto name = optional_name();
      spec.kind = par;
      record_name(spec, name);
      spec.children = children(kw);
      if (!threshold_given)
        std::get<Parallel>(spec.kind).policy.threshold = static_cast<int>(spec.children.size());
      return spec;
    }
    // decorators
    Decorator dec;
    if (kw.text == "inverter") {
      dec.kind = StatusMap::inverter();
    } else if (kw.text == "running_is_failure") {
      dec.kind = StatusMap::running_is_failure();
    } else if (kw.text == "oneshot") {
      dec.kind = OneShot{};
    } else {
      if (!(peek_is("map") && peek(1).text == "=")) fail("expected 'map='");
      next();
      next();
      StatusMap m;
      expect("[");
      for (int i = 0; i < 3; ++i) {
        if (i) expect(",");
        m.to[static_cast<std::size_t>(i)] = status();
      }
      expect("]");
      dec.kind = m;
    }
    const auto name = optional_name();
    spec.kind = dec;
    record_name(spec, name);
    spec.children = children(kw);
    return spec;
  }

  void leaf_body(LeafProfile& profile) {
    expect("{");
    bool seen_statuses = false;
    while (!peek_punct("}")) {
      if (peek_is("statuses")) {
        const Token at = next();
        if (seen_statuses) throw ParseError("duplicate 'statuses'", at.line, at.column);
        seen_statuses = true;
        expect(":");
        expect("[");
        StatusSet set;
        set.insert(status());
        while (peek_punct(",")) {
          next();
          set.insert(status());
        }
        expect("]");
        profile.status_domain = set;
      } else if (peek_is("effect")) {
        next();
        profile.effects.push_back(effect());
      } else {
        fail("expected 'statuses', 'effect' or '}'");
      }
    }
    next();
  }

  BlackboardEffect effect() {
    const Token var = expect_kind(Tok::Ident, "variable name");
    const BlackboardDecl* decl = nullptr;
    for (const auto& d : *blackboard_)
      if (d.name == var.text) decl = &d;
    if (!decl)
      throw ParseError("undeclared blackboard variable '" + var.text + "'", var.line, var.column);
    BlackboardEffect e;
    e.variable = var.text;
    if (!peek_is("on")) fail("expected 'on'");
    next();
    if (peek_is("tick")) {
      next();
      e.trigger = OnTick{};
    } else {
      e.trigger = OnStatus{status()};
    }
    expect("=");
    if (peek_is("any")) {
      next();
      e.update = NondetInDomain{};
    } else if (peek_punct("{")) {
      const Token open = next();
      SetFromStatus m;
      std::array<bool, 3> given{};
      while (!peek_punct("}")) {
        const Status s = status();
        expect(":");
        m.values[static_cast<std::size_t>(run_index(s))] = value(decl->domain, decl->name);
        given[static_cast<std::size_t>(run_index(s))] = true;
        if (peek_punct(",")) next();
      }
      next();
      if (!(given[0] && given[1] && given[2]))
        throw ParseError("status map must give a value for S, F and R", open.line, open.column);
      e.update = m;
    } else {
      e.update = SetConstant{value(decl->domain, decl->name)};
    }
    return e;
  }

  // Anonymous nodes get "<kind>_<k>" names that do not clash with explicit ones.
  void name_anonymous(NodeSpec& spec) {
    if (spec.name.empty()) {
      const std::string base = kind_word(spec.kind);
      int& k = counters_[base];
      do {
        spec.name = base + "_" + std::to_string(++k);
      } while (names_.count(spec.name));
    }
    for (NodeSpec& c : spec.children) name_anonymous(c);
  }

  static std::string kind_word(const NodeKind& kind) {
    if (const auto* d = std::get_if<Decorator>(&kind)) {
      if (std::holds_alternative<OneShot>(d->kind)) return "oneshot";
      const auto& m = std::get<StatusMap>(d->kind);
      if (m == StatusMap::inverter()) return "inverter";
      if (m == StatusMap::running_is_failure()) return "running_is_failure";
      return "decorator";
    }
    return kind_name(kind);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Token> names_;
  std::map<std::string, int> counters_;
  const std::vector<BlackboardDecl>* blackboard_ = nullptr;
};

}  // namespace

TreeDocument parse(const std::string& text) { return Parser(text).run(); }

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

std::string status_list(const std::vector<Status>& statuses) {
  std::string out = "[";
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    if (i) out += ", ";
    out.push_back(status_letter(statuses[i]));
  }
  return out + "]";
}

class Writer {
 public:
  explicit Writer(const Tree& tree) : tree_(tree) {}

  void blackboard(std::ostream& out) const {
    if (tree_.blackboard().empty()) return;
    out << "blackboard {\n";
    for (const auto& d : tree_.blackboard()) {
      out << "  " << d.name << ": ";
      if (std::holds_alternative<BoolDomain>(d.domain)) {
        out << "bool";
      } else if (const auto* r = std::get_if<IntRange>(&d.domain)) {
        out << "int[" << r->lo << ".." << r->hi << "]";
      } else {
        const auto& labels = std::get<EnumDomain>(d.domain).labels;
        out << "enum[";
        for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? ", " : "") << labels[i];
        out << "]";
      }
      out << " = " << format_value(d.domain, d.initial) << "\n";
    }
    out << "}\n";
  }

  void node(std::ostream& out, NodeId n, int depth) const {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string& name = tree_.name(n);
    std::visit([&](const auto& k) { head(out, pad, n, name, k); }, tree_.kind(n));
    if (tree_.is_leaf(n)) return;
    out << " {\n";
    for (NodeId c : tree_.children(n)) node(out, c, depth + 1);
    out << pad << "}\n";
  }

 private:
  void head(std::ostream& out, const std::string& pad, NodeId, const std::string& name,
            const Leaf& leaf) const {
    const LeafProfile& p = leaf.profile;
    out << pad << "leaf " << name;
    const bool restricted = !(p.status_domain == StatusSet::all());
    if (p.effects.empty()) {
      if (restricted) out << " { statuses: " << status_list(p.status_domain.members()) << " }";
      out << "\n";
      return;
    }
    out << " {\n";
    if (restricted) out << pad << "  statuses: " << status_list(p.status_domain.members()) << "\n";
    for (const auto& e : p.effects) {
      const Domain& dom = tree_.blackboard()[*tree_.find_variable(e.variable)].domain;
      out << pad << "  effect " << e.variable << " on ";
      if (std::holds_alternative<OnTick>(e.trigger)) {
        out << "tick";
      } else {
        out << status_letter(std::get<OnStatus>(e.trigger).status);
      }
      out << " = ";
      if (std::holds_alternative<NondetInDomain>(e.update)) {
        out << "any";
      } else if (const auto* c = std::get_if<SetConstant>(&e.update)) {
        out << format_value(dom, c->value);
      } else {
        const auto& m = std::get<SetFromStatus>(e.update);
        out << "{S: " << format_value(dom, m.values[0]) << ", F: " << format_value(dom, m.values[1])
            << ", R: " << format_value(dom, m.values[2]) << "}";
      }
      out << "\n";
    }
    out << pad << "}\n";
  }

  void head(std::ostream& out, const std::string& pad, NodeId, const std::string& name,
            const Selector& s) const {
    out << pad << "selector " << (s.memory ? "memory " : "") << name;
  }
  void head(std::ostream& out, const std::string& pad, NodeId, const std::string& name,
            const Sequence& s) const {
    out << pad << "sequence " << (s.memory ? "memory " : "") << name;
  }
  void head(std::ostream& out, const std::string& pad, NodeId, const std::string& name,
            const Parallel& p) const {
    out << pad << "parallel " << (p.synchronized ? "sync " : "") << "threshold="
        << p.policy.threshold
        << (p.policy.flavor == ParallelFlavor::Threshold ? " flavor=threshold " : " ") << name;
  }
  void head(std::ostream& out, const std::string& pad, NodeId, const std::string& name,
            const Decorator& d) const {
    out << pad;
    if (std::holds_alternative<OneShot>(d.kind)) {
      out << "oneshot ";
    } else {
      const auto& m = std::get<StatusMap>(d.kind);
      if (m == StatusMap::inverter()) {
        out << "inverter ";
      } else if (m == StatusMap::running_is_failure()) {
        out << "running_is_failure ";
      } else {
        out << "decorator map=" << status_list({m.to.begin(), m.to.end()}) << " ";
      }
    }
    out << name;
  }

  const Tree& tree_;
};

}  // namespace

std::string serialize(const TreeDocument& doc) {
  std::ostringstream out;
  out << "format " << doc.format_version << "\n";
  if (doc.blackboard_include) out << "include blackboard " << quote(*doc.blackboard_include) << "\n";
  if (doc.spec_include) out << "include specs " << quote(*doc.spec_include) << "\n";
  Writer w(doc.tree);
  w.blackboard(out);
  w.node(out, doc.tree.root(), 0);
  return out.str();
}

std::string serialize(const Tree& tree) {
  TreeDocument doc;
  doc.tree = tree;
  return serialize(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TreeDocument load_file(const std::string& path) {
  const std::string text = read_file(path);
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? parse_json(text) : parse(text);
}

}  // namespace btv::dsl
