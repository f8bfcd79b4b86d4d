#pragma once

#include <cmath>
#include <span>

#include "anlock/circuits/model.hpp"

namespace anlock::twg {

/// Integrator/comparator triangle generator.
///
/// The charging mirror ramps the integrator from v_low to v_high in
/// C (v_high - v_low) / I_charge, the discharging mirror ramps it back in
/// C (v_high - v_low) / I_discharge. The waveform starts at v_low, rising.
struct Waveform {
  double v_low;
  double v_high;
  double rise_s;
  double fall_s;

  double period() const { return rise_s + fall_s; }
  double amplitude() const { return 0.5 * (v_high - v_low); }

  double at(double t) const {
    const double tau = std::fmod(t, period());
    const double swing = v_high - v_low;
    if (tau < rise_s) return v_low + swing * tau / rise_s;
    return v_high - swing * (tau - rise_s) / fall_s;
  }
};

inline Waveform waveform(const CircuitSpec& spec, std::span<const double> params) {
  const double c = spec.constant("c_int");
  const double lo = spec.constant("v_low");
  const double hi = spec.constant("v_high");
  if (!(hi > lo)) throw DegenerateModel("comparator thresholds out of order");
  const double swing = hi - lo;
  Waveform w{lo, hi, c * swing / mirror_current(params[0], spec),
             c * swing / mirror_current(params[1], spec)};
  if (!(w.rise_s > 0.0) || !(w.fall_s > 0.0) || !std::isfinite(w.period()))
    throw DegenerateModel("triangle period is not positive");
  return w;
}

inline ResponseCurve transient(const CircuitSpec& spec, std::span<const double> params,
                               const SamplingGrid& grid) {
  const auto w = waveform(spec, params);
  auto ts = grid.points();
  std::vector<double> ys(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = w.at(ts[i]);
  return {Axis::TimeS, YUnit::Volt, std::move(ts), std::move(ys)};
}

}  // namespace anlock::twg
