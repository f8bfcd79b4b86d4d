#pragma once

#include <cmath>
#include <complex>
#include <span>

#include "anlock/circuits/model.hpp"
#include "anlock/circuits/pll.hpp"

namespace anlock::receiver {

/// Superheterodyne chain observed at the amplifier output.
///
/// RF preselector (resonator tuned by the LNA mirror) -> mixer driven by the
/// PLL local oscillator -> IF band-pass (bandwidth set by its damping mirror)
/// -> output amplifier (gain set by its bias mirror). The mixer folds both
/// f_LO + f_IF and the image f_LO - f_IF into the IF filter, so moving the
/// PLL width slides the whole passband along the RF axis.
struct Chain {
  double f_lo;
  double f_pre;
  double q_pre;
  double f_if;
  double bw_if;
  double mixer_gain;
  double amp_gain;
};

inline Chain chain(const CircuitSpec& spec, std::span<const double> w) {
  Chain c{};
  c.f_lo = pll::lock_frequency(spec, w[0]);
  c.f_pre = spec.constant("pre_k") * std::sqrt(mirror_current(w[1], spec));
  c.q_pre = spec.constant("pre_q");
  c.f_if = spec.constant("f_if");
  c.bw_if = spec.constant("if_k") * std::sqrt(mirror_current(w[2], spec));
  c.mixer_gain = spec.constant("mixer_gain");
  c.amp_gain = spec.constant("amp_k") * std::sqrt(mirror_current(w[3], spec));
  if (!(c.f_lo > 0.0) || !(c.f_pre > 0.0) || !(c.bw_if > 0.0))
    throw DegenerateModel("receiver block frequency is not positive");
  return c;
}

inline double resonator(double f, double f0, double q) {
  return 1.0 / std::abs(std::complex<double>(1.0, q * (f / f0 - f0 / f)));
}

inline double magnitude(const Chain& c, double f_rf) {
  const double f_mix = std::abs(f_rf - c.f_lo);
  const double h_if = f_mix > 0.0 ? resonator(f_mix, c.f_if, c.f_if / c.bw_if) : 0.0;
  return c.mixer_gain * c.amp_gain * resonator(f_rf, c.f_pre, c.q_pre) * h_if;
}

inline ResponseCurve frequency_response(const CircuitSpec& spec, std::span<const double> params,
                                        const SamplingGrid& grid) {
  const auto c = chain(spec, params);
  auto xs = grid.points();
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = to_db(magnitude(c, xs[i]));
  return {Axis::FrequencyHzLog, YUnit::Decibel, std::move(xs), std::move(ys)};
}

}  // namespace anlock::receiver
