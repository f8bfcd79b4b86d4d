#pragma once

#include <span>
#include <string>
#include <vector>

#include "anlock/circuits/bpf.hpp"
#include "anlock/circuits/model.hpp"
#include "anlock/circuits/ota.hpp"
#include "anlock/circuits/pll.hpp"
#include "anlock/circuits/receiver.hpp"
#include "anlock/circuits/response.hpp"
#include "anlock/circuits/twg.hpp"

namespace anlock {

/// Pure function of (design, params, grid). The grid's axis selects the
/// observable for circuits that expose more than one (PLL: time -> control
/// transient, frequency -> control spectrum).
inline ResponseCurve simulate(const ModelDesign& design, std::span<const double> params,
                              const SamplingGrid& grid) {
  validate_params(design.kind, params);
  grid.validate();
  const auto& spec = design.spec;
  const bool freq = grid.axis == Axis::FrequencyHzLog;
  switch (design.kind) {
    case CircuitKind::OTA:
      if (freq) return ota::frequency_response(spec, params, grid);
      break;
    case CircuitKind::BPF:
      if (freq) return bpf::frequency_response(spec, params, grid);
      break;
    case CircuitKind::PLL:
      return freq ? pll::spectrum(spec, params, grid) : pll::transient(spec, params, grid);
    case CircuitKind::TWG:
      if (!freq) return twg::transient(spec, params, grid);
      break;
    case CircuitKind::Receiver:
      if (freq) return receiver::frequency_response(spec, params, grid);
      break;
  }
  throw InvalidGrid(std::string(to_string(design.kind)) + " has no observable on a " +
                    std::string(to_string(grid.axis)) + " axis");
}

inline ResponseCurve simulate(const CircuitModel& model, std::span<const double> params,
                              const SamplingGrid& grid) {
  return simulate(model.design, params, grid);
}

/// Every declared observable, in `observable_names` order.
inline std::vector<ResponseCurve> simulate_observables(const ModelDesign& design,
                                                       std::span<const double> params) {
  std::vector<ResponseCurve> out;
  for (const auto& name : observable_names(design.kind))
    out.push_back(simulate(design, params, design.grid(name)));
  return out;
}

inline ResponseCurve simulate_twg(const ModelDesign& design, std::span<const double> params,
                                  const SamplingGrid& grid) {
  if (design.kind != CircuitKind::TWG) throw InvalidParams("simulate_twg needs a TWG model");
  return simulate(design, params, grid);
}

inline ResponseCurve simulate_receiver(const ModelDesign& design, std::span<const double> params,
                                       const SamplingGrid& grid) {
  if (design.kind != CircuitKind::Receiver)
    throw InvalidParams("simulate_receiver needs a receiver model");
  return simulate(design, params, grid);
}

struct PllMetrics {
  double f_locking_hz;
  double t_settle_s;
  friend bool operator==(const PllMetrics&, const PllMetrics&) = default;
};

/// Locking frequency and 1% settling time of the (embedded) PLL.
inline PllMetrics simulate_pll_metrics(const ModelDesign& design, std::span<const double> params) {
  if (design.kind != CircuitKind::PLL && design.kind != CircuitKind::Receiver)
    throw InvalidParams("PLL metrics need a PLL or receiver model");
  validate_params(design.kind, params);
  const auto loop = pll::loop_from_spec(design.spec);
  return {pll::lock_frequency(design.spec, params[0]), pll::settling_time(loop)};
}

}  // namespace anlock
