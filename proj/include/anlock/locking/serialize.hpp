#pragma once

#include "anlock/circuits/io.hpp"
#include "anlock/locking/locked.hpp"

namespace anlock {

inline json to_json(const LockGrid& g) {
  std::vector<std::vector<int>> placement(g.rows, std::vector<int>(g.cols));
  std::vector<std::vector<int>> key_map(g.rows, std::vector<int>(g.cols));
  for (std::size_t r = 0; r < g.rows; ++r)
    for (std::size_t c = 0; c < g.cols; ++c) {
      placement[r][c] = g.present(r, c);
      key_map[r][c] = g.key_bit(r, c);
    }
  return {{"m", g.rows}, {"n", g.cols}, {"col_widths", g.col_widths},
          {"placement", placement}, {"key_map", key_map}};
}

inline LockGrid lock_grid_from_json(const json& j) {
  LockGrid g;
  g.rows = j.at("m").get<std::size_t>();
  g.cols = j.at("n").get<std::size_t>();
  g.col_widths = j.at("col_widths").get<std::vector<double>>();
  const auto placement = j.at("placement").get<std::vector<std::vector<int>>>();
  const auto key_map = j.at("key_map").get<std::vector<std::vector<int>>>();
  if (placement.size() != g.rows || key_map.size() != g.rows)
    throw ParseError("lock grid rows do not match m");
  for (std::size_t r = 0; r < g.rows; ++r) {
    if (placement[r].size() != g.cols || key_map[r].size() != g.cols)
      throw ParseError("lock grid columns do not match n");
    for (std::size_t c = 0; c < g.cols; ++c) {
      g.placement.push_back(placement[r][c] != 0);
      g.key_map.push_back(key_map[r][c]);
    }
  }
  g.validate();
  return g;
}

/// Attack-facing document: {scheme, k, grids[], base_ref}. No key, no nominal widths.
inline json to_json(const LockedView& v) {
  json grids = json::array();
  for (const auto& g : v.grids) grids.push_back(to_json(g));
  return {{"scheme", to_string(v.scheme)},
          {"k", v.k},
          {"grids", grids},
          {"base_ref", to_json(v.design.without_design_targets())}};
}

inline LockedView view_from_json(const json& j) {
  LockedView v;
  v.scheme = parse_scheme(j.at("scheme").get<std::string>());
  v.k = j.at("k").get<std::size_t>();
  for (const auto& g : j.at("grids")) v.grids.push_back(lock_grid_from_json(g));
  v.design = design_from_json(j.at("base_ref"));
  v.validate();
  return v;
}

/// Oracle-side document: the view plus the full base model and the locking key.
inline json to_json(const LockedNetlist& n) {
  json j = to_json(n.view());
  j["base_model"] = to_json(n.base);
  j["locking_key"] = n.locking_key.to_hex();
  return j;
}

inline LockedNetlist netlist_from_json(const json& j) {
  if (!j.contains("locking_key")) throw ParseError("not an oracle-side locked netlist");
  const auto v = view_from_json(j);
  LockedNetlist n;
  n.base = model_from_json(j.at("base_model"));
  n.scheme = v.scheme;
  n.k = v.k;
  n.grids = v.grids;
  n.locking_key = Key::from_hex(j.at("locking_key").get<std::string>(), v.k);
  return n;
}

}  // namespace anlock
