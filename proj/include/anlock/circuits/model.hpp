#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anlock/circuits/response.hpp"
#include "anlock/core/error.hpp"

namespace anlock {

enum class CircuitKind { OTA, BPF, PLL, TWG, Receiver };

inline std::string_view to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::OTA: return "ota";
    case CircuitKind::BPF: return "bpf";
    case CircuitKind::PLL: return "pll";
    case CircuitKind::TWG: return "twg";
    case CircuitKind::Receiver: return "receiver";
  }
  return "?";
}

inline CircuitKind parse_kind(std::string_view s) {
  if (s == "ota") return CircuitKind::OTA;
  if (s == "bpf") return CircuitKind::BPF;
  if (s == "pll") return CircuitKind::PLL;
  if (s == "twg") return CircuitKind::TWG;
  if (s == "receiver") return CircuitKind::Receiver;
  throw ParseError("unknown circuit kind '" + std::string(s) + "'");
}

/// Names of the locked parameter slots, in parameter-vector order.
inline std::vector<std::string> param_names(CircuitKind k) {
  switch (k) {
    case CircuitKind::OTA: return {"w_bias"};
    case CircuitKind::BPF:
      return {"w_q_a", "w_int1_a", "w_int2_a", "w_q_b", "w_int_b", "w_in_b"};
    case CircuitKind::PLL: return {"w_vco"};
    case CircuitKind::TWG: return {"w_charge", "w_discharge"};
    case CircuitKind::Receiver: return {"w_pll", "w_lna", "w_if", "w_amp"};
  }
  return {};
}

inline std::size_t param_count(CircuitKind k) { return param_names(k).size(); }

/// Observables in the order attacks stack them as fitness criteria.
inline std::vector<std::string> observable_names(CircuitKind k) {
  switch (k) {
    case CircuitKind::PLL: return {"transient", "spectrum"};
    case CircuitKind::TWG: return {"transient"};
    default: return {"frequency"};
  }
}

/// Effective transistor widths in meters, one per locked slot.
using ParamVector = std::vector<double>;

/// Reference current plus the fixed design constants of one circuit.
///
/// `constants` is what a netlist reveals (capacitors, device parameters).
/// `design_targets` is designer intent (intended bias currents per slot) and
/// is never part of the attack-facing view.
struct CircuitSpec {
  double i_ref = 0.0;
  std::map<std::string, double> constants;
  std::map<std::string, double> design_targets;

  double constant(const std::string& name) const {
    auto it = constants.find(name);
    if (it == constants.end())
      throw InvalidParams("circuit constant '" + name + "' missing");
    return it->second;
  }

  bool has(const std::string& name) const { return constants.contains(name); }

  void validate() const {
    if (!(i_ref > 0.0) || !std::isfinite(i_ref))
      throw InvalidParams("i_ref must be positive and finite");
    for (const auto& [name, v] : constants)
      if (!std::isfinite(v)) throw InvalidParams("constant '" + name + "' not finite");
  }

  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

/// Everything about a circuit except the values of its locked parameters.
struct ModelDesign {
  CircuitKind kind = CircuitKind::OTA;
  CircuitSpec spec;
  std::map<std::string, SamplingGrid> grids;

  const SamplingGrid& grid(const std::string& name) const {
    auto it = grids.find(name);
    if (it == grids.end()) throw InvalidGrid("grid '" + name + "' not defined");
    return it->second;
  }

  ModelDesign without_design_targets() const {
    ModelDesign copy = *this;
    copy.spec.design_targets.clear();
    return copy;
  }

  friend bool operator==(const ModelDesign&, const ModelDesign&) = default;
};

struct CircuitModel {
  ModelDesign design;
  ParamVector nominal_params;

  CircuitKind kind() const { return design.kind; }
  const CircuitSpec& spec() const { return design.spec; }

  friend bool operator==(const CircuitModel&, const CircuitModel&) = default;
};

inline void validate_params(CircuitKind kind, std::span<const double> params) {
  if (params.size() != param_count(kind))
    throw InvalidParams(std::string(to_string(kind)) + " expects " +
                        std::to_string(param_count(kind)) + " parameters, got " +
                        std::to_string(params.size()));
  for (double v : params)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidParams("parameters must be positive and finite");
}

/// Square-law current mirror: I_out = (W / W_ref) * I_ref.
inline double mirror_current(double width, const CircuitSpec& spec) {
  return width / spec.constant("w_ref") * spec.i_ref;
}

}  // namespace anlock
