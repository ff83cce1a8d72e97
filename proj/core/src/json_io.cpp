#include <json.hpp>
#include <string>

#include "htc/error.hpp"
#include "htc/io.hpp"

namespace htc::io {

using nlohmann::json;

namespace {

json one_based(const std::vector<std::size_t>& items) {
  json arr = json::array();
  for (std::size_t i : items) arr.push_back(i + 1);
  return arr;
}

std::vector<std::size_t> zero_based(const json& arr) {
  std::vector<std::size_t> out;
  for (const auto& v : arr) {
    const auto i = v.get<std::size_t>();
    if (i == 0) fail(ErrorCategory::parse, "hierarchy indices are 1-based");
    out.push_back(i - 1);
  }
  return out;
}

}  // namespace

std::string hierarchy_json(const ClusterHierarchy& h, const std::vector<std::string>* labels) {
  json doc;
  doc["item_count"] = h.item_count;
  if (labels != nullptr) doc["labels"] = *labels;
  doc["rule"] = h.rule == LinkRule::inclusive ? "inclusive" : "strict";
  doc["grid"] = {{"r_max", h.grid.r_max}, {"r_min", h.grid.r_min}, {"M", h.grid.steps},
                 {"h", h.grid.step},       {"exact", h.grid.exact},  {"values", h.grid.values}};

  json levels = json::array();
  for (std::size_t m = 0; m < h.levels.size(); ++m) {
    const Partition& p = h.levels[m];
    validate_partition(p, h.item_count);
    json clusters = json::array();
    for (const auto& c : p.clusters()) clusters.push_back(one_based(c));
    levels.push_back({{"index", m}, {"r", p.level()}, {"clusters", std::move(clusters)}});
  }
  doc["levels"] = std::move(levels);

  json merges = json::array();
  for (const auto& e : h.merges) {
    merges.push_back({{"level", e.level},
                      {"level_index", e.level_index},
                      {"absorbed", one_based(e.absorbed)},
                      {"result", e.result + 1}});
  }
  doc["merges"] = std::move(merges);

  doc["stats"] = {{"predicate_evaluations", h.stats.predicate_evaluations},
                  {"distance_reads", h.stats.distance_reads},
                  {"evaluated_levels", h.stats.evaluated_levels},
                  {"evaluations_per_level", h.stats.evaluations_per_level}};
  return doc.dump(1) + "\n";
}

void export_hierarchy_json(const ClusterHierarchy& h, const std::filesystem::path& path,
                           const std::vector<std::string>* labels) {
  write_file(path, hierarchy_json(h, labels));
}

ClusterHierarchy parse_hierarchy_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    ClusterHierarchy h;
    h.item_count = doc.at("item_count").get<std::size_t>();
    const auto rule = doc.at("rule").get<std::string>();
    if (rule != "inclusive" && rule != "strict") fail(ErrorCategory::parse, "unknown link rule '" + rule + "'");
    h.rule = rule == "inclusive" ? LinkRule::inclusive : LinkRule::strict;

    const json& g = doc.at("grid");
    h.grid.r_max = g.at("r_max").get<double>();
    h.grid.r_min = g.at("r_min").get<double>();
    h.grid.steps = g.at("M").get<std::size_t>();
    h.grid.step = g.at("h").get<double>();
    h.grid.exact = g.at("exact").get<bool>();
    h.grid.values = g.at("values").get<std::vector<double>>();

    for (const auto& level : doc.at("levels")) {
      std::vector<Cluster> clusters;
      for (const auto& c : level.at("clusters")) clusters.push_back(zero_based(c));
      Partition p(level.at("r").get<double>(), std::move(clusters));
      validate_partition(p, h.item_count);
      // Share unchanged cluster lists like run_htc does.
      if (!h.levels.empty() && h.levels.back().clusters() == p.clusters()) {
        h.levels.push_back(h.levels.back().at_level(p.level()));
      } else {
        h.levels.push_back(std::move(p));
      }
    }

    for (const auto& m : doc.at("merges")) {
      MergeEvent e;
      e.level = m.at("level").get<double>();
      e.level_index = m.at("level_index").get<std::size_t>();
      e.absorbed = zero_based(m.at("absorbed"));
      const auto result = m.at("result").get<std::size_t>();
      if (result == 0) fail(ErrorCategory::parse, "hierarchy indices are 1-based");
      e.result = result - 1;
      h.merges.push_back(std::move(e));
    }

    if (doc.contains("stats")) {
      const json& s = doc.at("stats");
      h.stats.predicate_evaluations = s.at("predicate_evaluations").get<std::size_t>();
      h.stats.distance_reads = s.at("distance_reads").get<std::size_t>();
      h.stats.evaluated_levels = s.at("evaluated_levels").get<std::size_t>();
      h.stats.evaluations_per_level = s.at("evaluations_per_level").get<std::vector<std::size_t>>();
    }
    return h;
  } catch (const json::exception& e) {
    fail(ErrorCategory::parse, std::string("malformed hierarchy JSON: ") + e.what());
  }
}

ClusterHierarchy load_hierarchy_json(const std::filesystem::path& path) {
  try {
    return parse_hierarchy_json(read_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

}  // namespace htc::io
