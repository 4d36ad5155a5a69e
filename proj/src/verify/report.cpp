#include <json.hpp>

#include "btv/dsl.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

namespace {

nlohmann::ordered_json decisions_json(const Tree& tree, const OracleTable& t) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [key, status] : t.statuses)
    out.push_back({{"tick", key.first + 1},
                   {"leaf", tree.name(NodeId{key.second})},
                   {"status", std::string(1, status_letter(status))}});
  for (const auto& [key, index] : t.values)
    out.push_back({{"tick", std::get<0>(key) + 1},
                   {"leaf", tree.name(NodeId{std::get<1>(key)})},
                   {"effect", std::get<2>(key)},
                   {"choice", index}});
  return out;
}

}  // namespace

std::string report_json(const DiffReport& report, const std::string& label) {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["trees"] = report.trees;
  j["states"] = report.states;
  j["transitions"] = report.transitions;
  j["divergences"] = report.divergences();
  auto items = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto* d = std::get_if<Diverged>(&report.results[i].verdict);
    if (!d) continue;
    items.push_back({{"index", i},
                     {"tick", d->tick},
                     {"field", d->field},
                     {"left", d->left},
                     {"right", d->right},
                     {"tree", dsl::serialize(*d->tree)},
                     {"decisions", decisions_json(*d->tree, d->oracle)},
                     {"summary", report.results[i].summary()}});
  }
  j["diverged"] = std::move(items);
  return j.dump(2) + "\n";
}

}  // namespace btv::verify
