#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "anlock/circuits/model.hpp"

namespace anlock::ota {

/// Single-stage OTA biased by one current mirror.
///
/// gm = sqrt(2 beta I), r_out = 1 / (lambda I), one dominant pole at the
/// output node. Raising the bias width lowers the DC gain (as I^-1/2) and
/// raises the unity-gain frequency (as I^1/2).
struct OperatingPoint {
  double i_bias;
  double gm;
  double r_out;
  double dc_gain;
  double pole_hz;
};

inline OperatingPoint operating_point(const CircuitSpec& spec, double width) {
  const double i = mirror_current(width, spec);
  const double gm = std::sqrt(2.0 * spec.constant("beta") * i);
  const double r_out = 1.0 / (spec.constant("lambda") * i);
  const double pole = 1.0 / (2.0 * std::numbers::pi * r_out * spec.constant("c_load"));
  if (!(pole > 0.0) || !std::isfinite(pole)) throw DegenerateModel("OTA pole is not positive");
  return {i, gm, r_out, gm * r_out, pole};
}

inline std::complex<double> gain(const OperatingPoint& op, double f) {
  return op.dc_gain / std::complex<double>(1.0, f / op.pole_hz);
}

/// Frequency at which |A| = 1.
inline double unity_gain_hz(const OperatingPoint& op) {
  if (op.dc_gain <= 1.0) throw DegenerateModel("OTA DC gain below unity");
  return op.pole_hz * std::sqrt(op.dc_gain * op.dc_gain - 1.0);
}

inline ResponseCurve frequency_response(const CircuitSpec& spec, std::span<const double> params,
                                        const SamplingGrid& grid) {
  const auto op = operating_point(spec, params[0]);
  auto xs = grid.points();
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = to_db(std::abs(gain(op, xs[i])));
  return {Axis::FrequencyHzLog, YUnit::Decibel, std::move(xs), std::move(ys)};
}

}  // namespace anlock::ota
