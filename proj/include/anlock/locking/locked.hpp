#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "anlock/circuits/simulate.hpp"
#include "anlock/locking/grid.hpp"

namespace anlock {

enum class LockScheme { SmtLock, PbLock };

inline std::string_view to_string(LockScheme s) {
  return s == LockScheme::SmtLock ? "smt-lock" : "pb-lock";
}

inline LockScheme parse_scheme(std::string_view s) {
  if (s == "smt-lock" || s == "smt") return LockScheme::SmtLock;
  if (s == "pb-lock" || s == "pb") return LockScheme::PbLock;
  throw ParseError("unknown locking scheme '" + std::string(s) + "'");
}

/// Attack-facing view of a locked circuit: topology, constants and grid
/// structure. Holds neither the locking key nor the nominal widths.
struct LockedView {
  ModelDesign design;
  LockScheme scheme = LockScheme::SmtLock;
  std::size_t k = 0;
  std::vector<LockGrid> grids;  // one per parameter slot

  void validate() const {
    if (grids.size() != param_count(design.kind))
      throw InvalidParams("one lock grid per parameter slot required");
    std::vector<bool> used(k, false);
    for (const auto& g : grids) {
      g.validate();
      for (int b : g.key_bits()) {
        if (b < 0 || static_cast<std::size_t>(b) >= k || used[b])
          throw InvalidParams("grid key bits must cover 0..k-1 exactly once");
        used[b] = true;
      }
    }
    for (bool u : used)
      if (!u) throw InvalidParams("grid key bits must cover 0..k-1 exactly once");
  }

  friend bool operator==(const LockedView&, const LockedView&) = default;
};

/// Effective width of every slot under `key`.
inline ParamVector locked_widths(const LockedView& view, const Key& key) {
  if (key.size() != view.k)
    throw KeyLengthMismatch("key length " + std::to_string(key.size()) + " != k = " +
                            std::to_string(view.k));
  ParamVector w;
  w.reserve(view.grids.size());
  for (const auto& g : view.grids) w.push_back(effective_width(g, key));
  return w;
}

/// Keys that switch off every column of some slot leave that bias device open.
inline bool key_is_degenerate(const LockedView& view, const Key& key) {
  for (double w : locked_widths(view, key))
    if (!(w > 0.0)) return true;
  return false;
}

inline ResponseCurve locked_simulate(const LockedView& view, const Key& key,
                                     const SamplingGrid& grid) {
  const auto w = locked_widths(view, key);
  for (double x : w)
    if (!(x > 0.0)) throw DegenerateModel("key turns every column of a slot off");
  return simulate(view.design, w, grid);
}

inline std::vector<ResponseCurve> locked_observables(const LockedView& view, const Key& key) {
  const auto w = locked_widths(view, key);
  for (double x : w)
    if (!(x > 0.0)) throw DegenerateModel("key turns every column of a slot off");
  return simulate_observables(view.design, w);
}

/// Designer-side locked circuit. `base.nominal_params` equals the widths the
/// locking key selects.
struct LockedNetlist {
  CircuitModel base;
  LockScheme scheme = LockScheme::SmtLock;
  std::size_t k = 0;
  std::vector<LockGrid> grids;
  Key locking_key;

  LockedView view() const { return {base.design.without_design_targets(), scheme, k, grids}; }
};

/// Combined relative L2 distance over several observables:
/// sqrt(sum ||E - O||^2 / sum ||E||^2).
inline double relative_distance(const std::vector<ResponseCurve>& expected,
                                const std::vector<ResponseCurve>& observed) {
  if (expected.size() != observed.size()) throw InvalidGrid("observable count mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    num += squared_distance(expected[i], observed[i]);
    den += squared_norm(expected[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

/// Response-level match tolerance on the combined relative L2 distance.
inline constexpr double kMatchTolerance = 1e-6;

inline bool curves_match(const std::vector<ResponseCurve>& expected,
                         const std::vector<ResponseCurve>& observed,
                         double tolerance = kMatchTolerance) {
  return relative_distance(expected, observed) <= tolerance;
}

}  // namespace anlock
