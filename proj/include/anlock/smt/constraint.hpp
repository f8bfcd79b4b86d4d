#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "anlock/circuits/calibration.hpp"
#include "anlock/locking/locked.hpp"

namespace anlock::smt {

/// Lock equation per slot: the grid structure and the width it must realise.
struct LockConstraint {
  std::vector<LockGrid> grids;
  std::vector<double> targets;

  void validate() const {
    if (grids.size() != targets.size()) throw InvalidParams("one width target per grid required");
    for (const auto& g : grids) g.validate();
    for (double t : targets)
      if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParams("width targets must be finite and >= 0");
  }
};

namespace detail {

inline double need_constant(const CircuitSpec& spec, const std::string& name) {
  if (!spec.has(name)) throw SpecMissing("specification constant '" + name + "' is required");
  return spec.constants.at(name);
}

inline double need_metric(const Metrics& m, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end() || !std::isfinite(it->second))
    throw InvalidParams("oracle metric '" + name + "' missing");
  return it->second;
}

inline double width_for_current(double current, const CircuitSpec& spec) {
  return current / spec.i_ref * need_constant(spec, "w_ref");
}

/// Width of a slot from the specification's intended bias current.
inline double design_width(const CircuitSpec& spec, const std::string& slot) {
  const std::string key = "i_" + slot.substr(2);
  auto it = spec.design_targets.find(key);
  if (it == spec.design_targets.end())
    throw SpecMissing("specification lacks design current '" + key + "'");
  return width_for_current(it->second, spec);
}

}  // namespace detail

/// Per-slot target widths from the circuit equations inverted at the oracle's
/// measured characterisation. Needs the specification (reference current,
/// device constants, intended bias currents); the GA attack does not.
inline std::vector<double> derive_targets(const LockedView& view,
                                          const std::optional<CircuitSpec>& spec,
                                          const Metrics& metrics) {
  if (!spec) throw SpecMissing("the SMT attack needs the circuit specification");
  const CircuitSpec& s = *spec;
  if (!(s.i_ref > 0.0) || !std::isfinite(s.i_ref))
    throw SpecMissing("specification lacks the reference current i_ref");
  const auto names = param_names(view.design.kind);
  switch (view.design.kind) {
    case CircuitKind::OTA: {
      // A0 = sqrt(2 beta / I) / lambda
      const double a0 = std::pow(10.0, detail::need_metric(metrics, "gain_db") / 20.0);
      const double lambda = detail::need_constant(s, "lambda");
      const double i = 2.0 * detail::need_constant(s, "beta") / std::pow(lambda * a0, 2);
      return {detail::width_for_current(i, s)};
    }
    case CircuitKind::PLL: {
      const double v = detail::need_metric(metrics, "f_locking_hz") / detail::need_constant(s, "k_vco");
      return {detail::width_for_current(v / detail::need_constant(s, "r_bias"), s)};
    }
    case CircuitKind::TWG: {
      const double q = detail::need_constant(s, "c_int") *
                       (detail::need_constant(s, "v_high") - detail::need_constant(s, "v_low"));
      return {detail::width_for_current(q / detail::need_metric(metrics, "rise_s"), s),
              detail::width_for_current(q / detail::need_metric(metrics, "fall_s"), s)};
    }
    case CircuitKind::BPF: {
      std::vector<double> w;
      for (const auto& n : names) w.push_back(detail::design_width(s, n));
      return w;
    }
    case CircuitKind::Receiver: {
      std::vector<double> w;
      for (const auto& n : names) w.push_back(n == "w_pll" ? 0.0 : detail::design_width(s, n));
      for (const char* c : {"k_vco", "r_bias", "f_if", "pre_k", "pre_q", "if_k", "amp_k", "mixer_gain"})
        detail::need_constant(s, c);
      ModelDesign d = view.design;
      d.spec = s;
      const double center = detail::need_metric(metrics, "center_hz");
      const double guess = detail::design_width(s, "w_pll");
      w[0] = anlock::detail::bisect(
          [&](double x) {
            w[0] = x;
            return characterize(d, w).at("center_hz");
          },
          guess / 4.0, guess * 4.0, center, true);
      return w;
    }
  }
  throw InvalidParams("unknown circuit kind");
}

inline LockConstraint make_constraint(const LockedView& view, std::vector<double> targets) {
  LockConstraint c{view.grids, std::move(targets)};
  c.validate();
  return c;
}

}  // namespace anlock::smt
