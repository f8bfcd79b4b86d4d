#pragma once

#include <map>
#include <string>
#include <vector>

#include "anlock/circuits/metrics.hpp"
#include "anlock/locking/serialize.hpp"

namespace anlock {

/// What an attacker measures on the unlocked chip: one curve per declared
/// observable, its characterisation metrics and the grids used.
struct OracleBundle {
  CircuitKind kind = CircuitKind::OTA;
  std::map<std::string, ResponseCurve> curves;
  std::map<std::string, SamplingGrid> grids;
  Metrics metrics;

  /// Curves in observable order.
  std::vector<ResponseCurve> ordered() const {
    std::vector<ResponseCurve> out;
    for (const auto& name : observable_names(kind)) out.push_back(curves.at(name));
    return out;
  }

  friend bool operator==(const OracleBundle&, const OracleBundle&) = default;
};

/// The unlocked chip. Holds the locked netlist and its key; only `measure`
/// crosses to the attacker side.
class Oracle {
 public:
  explicit Oracle(LockedNetlist net) : net_(std::move(net)) {}

  OracleBundle measure() const {
    OracleBundle b;
    const auto view = net_.view();
    b.kind = view.design.kind;
    for (const auto& name : observable_names(b.kind)) {
      const auto& g = view.design.grid(name);
      b.grids[name] = g;
      b.curves[name] = locked_simulate(view, net_.locking_key, g);
    }
    b.metrics = characterize(view.design, locked_widths(view, net_.locking_key));
    return b;
  }

  LockedView view() const { return net_.view(); }
  const LockedNetlist& netlist() const { return net_; }

 private:
  LockedNetlist net_;
};

inline json curve_to_json(const ResponseCurve& c) {
  return {{"axis", to_string(c.axis())},
          {"y_unit", to_string(c.unit())},
          {"x", std::vector<double>(c.x().begin(), c.x().end())},
          {"y", std::vector<double>(c.y().begin(), c.y().end())}};
}

inline ResponseCurve curve_from_json(const json& j) {
  const auto unit = j.at("y_unit").get<std::string>();
  return {parse_axis(j.at("axis").get<std::string>()), unit == "dB" ? YUnit::Decibel : YUnit::Volt,
          j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>()};
}

inline json to_json(const OracleBundle& b) {
  json curves = json::object();
  json grids = json::object();
  for (const auto& [name, c] : b.curves) curves[name] = curve_to_json(c);
  for (const auto& [name, g] : b.grids) grids[name] = to_json(g);
  return {{"kind", to_string(b.kind)}, {"curves", curves}, {"grids", grids}, {"metrics", b.metrics}};
}

inline OracleBundle bundle_from_json(const json& j) {
  OracleBundle b;
  b.kind = parse_kind(j.at("kind").get<std::string>());
  for (const auto& [name, c] : j.at("curves").items()) b.curves[name] = curve_from_json(c);
  for (const auto& [name, g] : j.at("grids").items()) b.grids[name] = grid_from_json(g);
  b.metrics = j.value("metrics", Metrics{});
  for (const auto& name : observable_names(b.kind))
    if (!b.curves.contains(name)) throw ParseError("oracle lacks observable '" + name + "'");
  return b;
}

}  // namespace anlock
