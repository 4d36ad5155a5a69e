#include <set>

#include <json.hpp>

#include "btv/dsl.hpp"
#include "btv/error.hpp"
#include "btv/validate.hpp"

namespace btv::dsl {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error("json " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

std::string text_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) bad(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

Status status_of(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a status string");
  const auto s = parse_status(v.get<std::string>());
  if (!s || *s == Status::Invalid) bad(where, "expected S, F or R");
  return *s;
}

int value_of(const json& v, const BlackboardDecl& decl, const std::string& where) {
  if (std::holds_alternative<BoolDomain>(decl.domain)) {
    if (!v.is_boolean()) bad(where, "expected true or false for '" + decl.name + "'");
    return v.get<bool>() ? 1 : 0;
  }
  if (const auto* e = std::get_if<EnumDomain>(&decl.domain)) {
    if (v.is_string())
      for (std::size_t i = 0; i < e->labels.size(); ++i)
        if (e->labels[i] == v.get<std::string>()) return static_cast<int>(i);
    bad(where, "expected a label of '" + decl.name + "'");
  }
  if (!v.is_number_integer()) bad(where, "expected an integer for '" + decl.name + "'");
  const int x = v.get<int>();
  if (!domain_contains(decl.domain, x)) bad(where, "value outside the range of '" + decl.name + "'");
  return x;
}

json value_json(const BlackboardDecl& decl, int v) {
  if (std::holds_alternative<BoolDomain>(decl.domain)) return v != 0;
  if (std::holds_alternative<EnumDomain>(decl.domain)) return format_value(decl.domain, v);
  return v;
}

class Reader {
 public:
  explicit Reader(const std::vector<BlackboardDecl>& bb) : bb_(bb) {}

  NodeSpec node(const json& j, const std::string& where) {
    const std::string type = text_field(j, "type", where);
    NodeSpec spec;
    spec.name = text_field(j, "name", where);
    if (!names_.insert(spec.name).second) bad(where + "/name", "duplicate node name '" + spec.name + "'");
    if (type == "leaf") {
      LeafProfile profile;
      if (j.contains("statuses")) {
        const json& st = j["statuses"];
        if (!st.is_array() || st.empty()) bad(where + "/statuses", "expected a non-empty array");
        StatusSet set;
        for (std::size_t i = 0; i < st.size(); ++i)
          set.insert(status_of(st[i], where + "/statuses/" + std::to_string(i)));
        profile.status_domain = set;
      }
      if (j.contains("effects")) {
        const json& effects = j["effects"];
        if (!effects.is_array()) bad(where + "/effects", "expected an array");
        for (std::size_t i = 0; i < effects.size(); ++i)
          profile.effects.push_back(effect(effects[i], where + "/effects/" + std::to_string(i)));
      }
      spec.kind = Leaf{profile};
      return spec;
    }
    if (type == "selector" || type == "sequence") {
      const bool memory = j.value("memory", false);
      spec.kind = type == "selector" ? NodeKind{Selector{memory}} : NodeKind{Sequence{memory}};
    } else if (type == "parallel") {
      Parallel par;
      par.synchronized = j.value("synchronized", false);
      const std::string flavor = j.value("flavor", std::string("pytrees"));
      if (flavor == "threshold") {
        par.policy.flavor = ParallelFlavor::Threshold;
      } else if (flavor != "pytrees") {
        bad(where + "/flavor", "expected \"pytrees\" or \"threshold\"");
      }
      par.policy.threshold = -1;
      if (j.contains("threshold")) {
        if (!j["threshold"].is_number_integer()) bad(where + "/threshold", "expected an integer");
        par.policy.threshold = j["threshold"].get<int>();
      }
      spec.kind = par;
    } else if (type == "inverter") {
      spec.kind = Decorator{StatusMap::inverter()};
    } else if (type == "running_is_failure") {
      spec.kind = Decorator{StatusMap::running_is_failure()};
    } else if (type == "oneshot") {
      spec.kind = Decorator{OneShot{}};
    } else if (type == "decorator") {
      const json& m = field(j, "map", where);
      if (!m.is_array() || m.size() != 3) bad(where + "/map", "expected three statuses (S, F, R)");
      StatusMap map;
      for (std::size_t i = 0; i < 3; ++i) map.to[i] = status_of(m[i], where + "/map/" + std::to_string(i));
      spec.kind = Decorator{map};
    } else {
      bad(where + "/type", "unknown node type '" + type + "'");
    }
    const json& kids = field(j, "children", where);
    if (!kids.is_array()) bad(where + "/children", "expected an array");
    for (std::size_t i = 0; i < kids.size(); ++i)
      spec.children.push_back(node(kids[i], where + "/children/" + std::to_string(i)));
    if (auto* par = std::get_if<Parallel>(&spec.kind); par && par->policy.threshold < 0)
      par->policy.threshold = static_cast<int>(spec.children.size());
    return spec;
  }

 private:
  BlackboardEffect effect(const json& j, const std::string& where) {
    BlackboardEffect e;
    e.variable = text_field(j, "variable", where);
    const BlackboardDecl* decl = nullptr;
    for (const auto& d : bb_)
      if (d.name == e.variable) decl = &d;
    if (!decl) bad(where + "/variable", "undeclared blackboard variable '" + e.variable + "'");
    const std::string on = text_field(j, "on", where);
    if (on == "tick") {
      e.trigger = OnTick{};
    } else {
      e.trigger = OnStatus{status_of(j["on"], where + "/on")};
    }
    if (j.contains("value")) {
      e.update = SetConstant{value_of(j["value"], *decl, where + "/value")};
    } else if (j.contains("by_status")) {
      const json& m = j["by_status"];
      SetFromStatus s;
      const char* keys[] = {"S", "F", "R"};
      for (std::size_t i = 0; i < 3; ++i)
        s.values[i] = value_of(field(m, keys[i], where + "/by_status"), *decl,
                               where + "/by_status/" + keys[i]);
      e.update = s;
    } else if (j.value("any", false)) {
      e.update = NondetInDomain{};
    } else {
      bad(where, "effect needs \"value\", \"by_status\" or \"any\": true");
    }
    return e;
  }

  const std::vector<BlackboardDecl>& bb_;
  std::set<std::string> names_;
};

BlackboardDecl decl_of(const json& j, const std::string& where) {
  BlackboardDecl d;
  d.name = text_field(j, "name", where);
  const std::string type = text_field(j, "type", where);
  if (type == "bool") {
    d.domain = BoolDomain{};
  } else if (type == "int") {
    IntRange r;
    r.lo = field(j, "lo", where).get<int>();
    r.hi = field(j, "hi", where).get<int>();
    if (r.lo > r.hi) bad(where, "empty integer range");
    d.domain = r;
    d.initial = r.lo;
  } else if (type == "enum") {
    const json& labels = field(j, "labels", where);
    if (!labels.is_array() || labels.empty()) bad(where + "/labels", "expected a non-empty array");
    d.domain = EnumDomain{labels.get<std::vector<std::string>>()};
  } else {
    bad(where + "/type", "expected \"bool\", \"int\" or \"enum\"");
  }
  if (j.contains("initial")) d.initial = value_of(j["initial"], d, where + "/initial");
  return d;
}

json node_json(const Tree& tree, NodeId n) {
  json j;
  const Node& node = tree.node(n);
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Leaf>) {
          j["type"] = "leaf";
          j["name"] = node.name;
          json st = json::array();
          for (Status s : k.profile.status_domain.members()) st.push_back(std::string(1, status_letter(s)));
          j["statuses"] = st;
          if (!k.profile.effects.empty()) {
            json effects = json::array();
            for (const auto& e : k.profile.effects) {
              const BlackboardDecl& decl = tree.blackboard()[*tree.find_variable(e.variable)];
              json ej;
              ej["variable"] = e.variable;
              ej["on"] = std::holds_alternative<OnTick>(e.trigger)
                             ? std::string("tick")
                             : std::string(1, status_letter(std::get<OnStatus>(e.trigger).status));
              if (std::holds_alternative<NondetInDomain>(e.update)) {
                ej["any"] = true;
              } else if (const auto* c = std::get_if<SetConstant>(&e.update)) {
                ej["value"] = value_json(decl, c->value);
              } else {
                const auto& m = std::get<SetFromStatus>(e.update);
                ej["by_status"] = {{"S", value_json(decl, m.values[0])},
                                   {"F", value_json(decl, m.values[1])},
                                   {"R", value_json(decl, m.values[2])}};
              }
              effects.push_back(ej);
            }
            j["effects"] = effects;
          }
        } else if constexpr (std::is_same_v<T, Selector> || std::is_same_v<T, Sequence>) {
          j["type"] = std::is_same_v<T, Selector> ? "selector" : "sequence";
          j["name"] = node.name;
          j["memory"] = k.memory;
        } else if constexpr (std::is_same_v<T, Parallel>) {
          j["type"] = "parallel";
          j["name"] = node.name;
          j["synchronized"] = k.synchronized;
          j["threshold"] = k.policy.threshold;
          j["flavor"] = k.policy.flavor == ParallelFlavor::Threshold ? "threshold" : "pytrees";
        } else {
          j["name"] = node.name;
          if (std::holds_alternative<OneShot>(k.kind)) {
            j["type"] = "oneshot";
          } else {
            const auto& m = std::get<StatusMap>(k.kind);
            if (m == StatusMap::inverter()) {
              j["type"] = "inverter";
            } else if (m == StatusMap::running_is_failure()) {
              j["type"] = "running_is_failure";
            } else {
              j["type"] = "decorator";
              j["map"] = {std::string(1, status_letter(m.to[0])), std::string(1, status_letter(m.to[1])),
                          std::string(1, status_letter(m.to[2]))};
            }
          }
        }
      },
      node.kind);
  if (!tree.is_leaf(n)) {
    json kids = json::array();
    for (NodeId c : tree.children(n)) kids.push_back(node_json(tree, c));
    j["children"] = kids;
  }
  return j;
}

}  // namespace

TreeDocument parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    int col = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("invalid JSON", line, col);
  }
  TreeDocument doc;
  try {
    if (!j.is_object()) bad("", "expected an object");
    doc.format_version = j.value("format_version", kFormatVersion);
    if (doc.format_version != kFormatVersion)
      bad("/format_version", "unsupported format version " + std::to_string(doc.format_version));
    std::vector<BlackboardDecl> bb;
    if (j.contains("blackboard")) {
      const json& decls = j["blackboard"];
      if (!decls.is_array()) bad("/blackboard", "expected an array");
      for (std::size_t i = 0; i < decls.size(); ++i) {
        bb.push_back(decl_of(decls[i], "/blackboard/" + std::to_string(i)));
        for (std::size_t k = 0; k < i; ++k)
          if (bb[k].name == bb[i].name)
            bad("/blackboard/" + std::to_string(i), "duplicate variable '" + bb[i].name + "'");
      }
    }
    if (j.contains("blackboard_include")) doc.blackboard_include = text_field(j, "blackboard_include", "");
    if (j.contains("spec_include")) doc.spec_include = text_field(j, "spec_include", "");
    Reader reader(bb);
    doc.tree = Tree::build(reader.node(field(j, "tree", ""), "/tree"), bb);
  } catch (const json::exception& e) {
    throw Error(std::string("json: ") + e.what());
  }
  require_valid(doc.tree);
  return doc;
}

std::string serialize_json(const TreeDocument& doc) {
  json j;
  j["format_version"] = doc.format_version;
  if (!doc.tree.blackboard().empty()) {
    json decls = json::array();
    for (const auto& d : doc.tree.blackboard()) {
      json dj;
      dj["name"] = d.name;
      if (std::holds_alternative<BoolDomain>(d.domain)) {
        dj["type"] = "bool";
      } else if (const auto* r = std::get_if<IntRange>(&d.domain)) {
        dj["type"] = "int";
        dj["lo"] = r->lo;
        dj["hi"] = r->hi;
      } else {
        dj["type"] = "enum";
        dj["labels"] = std::get<EnumDomain>(d.domain).labels;
      }
      dj["initial"] = value_json(d, d.initial);
      decls.push_back(dj);
    }
    j["blackboard"] = decls;
  }
  if (doc.blackboard_include) j["blackboard_include"] = *doc.blackboard_include;
  if (doc.spec_include) j["spec_include"] = *doc.spec_include;
  j["tree"] = node_json(doc.tree, doc.tree.root());
  return j.dump(2) + "\n";
}

}  // namespace btv::dsl
