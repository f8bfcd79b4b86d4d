#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "anlock/circuits/model.hpp"

namespace anlock {

using json = nlohmann::json;

inline json to_json(const SamplingGrid& g) {
  return {{"axis", to_string(g.axis)},
          {"start", g.start},
          {"stop", g.stop},
          {"count", g.count},
          {"spacing", to_string(g.spacing)}};
}

inline SamplingGrid grid_from_json(const json& j) {
  SamplingGrid g;
  g.axis = parse_axis(j.at("axis").get<std::string>());
  g.start = j.at("start").get<double>();
  g.stop = j.at("stop").get<double>();
  g.count = j.at("count").get<std::size_t>();
  g.spacing = parse_spacing(j.at("spacing").get<std::string>());
  g.validate();
  return g;
}

inline json to_json(const CircuitSpec& s) {
  json j = {{"i_ref", s.i_ref}, {"constants", s.constants}};
  if (!s.design_targets.empty()) j["design_targets"] = s.design_targets;
  return j;
}

inline CircuitSpec spec_from_json(const json& j) {
  CircuitSpec s;
  s.i_ref = j.value("i_ref", 0.0);
  if (j.contains("constants")) s.constants = j.at("constants").get<std::map<std::string, double>>();
  if (j.contains("design_targets"))
    s.design_targets = j.at("design_targets").get<std::map<std::string, double>>();
  return s;
}

inline json to_json(const ModelDesign& d) {
  json grids = json::object();
  for (const auto& [name, g] : d.grids) grids[name] = to_json(g);
  return {{"kind", to_string(d.kind)}, {"spec", to_json(d.spec)}, {"grids", grids}};
}

inline ModelDesign design_from_json(const json& j) {
  ModelDesign d;
  d.kind = parse_kind(j.at("kind").get<std::string>());
  d.spec = spec_from_json(j.at("spec"));
  for (const auto& [name, g] : j.at("grids").items()) d.grids[name] = grid_from_json(g);
  for (const auto& name : observable_names(d.kind))
    if (!d.grids.contains(name)) throw ParseError("missing grid '" + name + "'");
  return d;
}

/// {kind, nominal_params[], spec{i_ref, constants{}}, grids{}}
inline json to_json(const CircuitModel& m) {
  json j = to_json(m.design);
  j["nominal_params"] = m.nominal_params;
  return j;
}

inline CircuitModel model_from_json(const json& j) {
  CircuitModel m;
  m.design = design_from_json(j);
  m.nominal_params = j.at("nominal_params").get<ParamVector>();
  validate_params(m.kind(), m.nominal_params);
  m.design.spec.validate();
  return m;
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

}  // namespace anlock
