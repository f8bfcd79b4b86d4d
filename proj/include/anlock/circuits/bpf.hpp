#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "anlock/circuits/model.hpp"

namespace anlock::bpf {

/// Fourth-order Gm-C band-pass: two cascaded biquads.
///
/// Section A (all three OTAs locked, input OTA fixed):
///   H_A = gm_in (C2 s + g_o) / ((C1 s + gm_q)(C2 s + g_o) + gm_1 gm_2)
/// where g_o = lambda * I_1 is the output conductance of the first integrator,
/// which places a low-frequency zero at g_o / C2.
///
/// Section B (input, damping and the shared integrator mirror locked):
///   H_B = gm_in (C2 s + g_o) / ((C1 s + gm_q)(C2 s + g_o) + gm^2)
///
/// The two sections differ structurally, so no relabelling of slot widths
/// reproduces the same response.
struct Transconductances {
  double gm_in_a, gm_q_a, gm_1_a, gm_2_a, go_a;
  double gm_in_b, gm_q_b, gm_b, go_b;
  double c1a, c2a, c1b, c2b;
};

inline Transconductances transconductances(const CircuitSpec& spec, std::span<const double> w) {
  const double beta = spec.constant("beta");
  const double lambda = spec.constant("lambda");
  auto gm = [&](double width) { return std::sqrt(2.0 * beta * mirror_current(width, spec)); };
  Transconductances t{};
  t.gm_in_a = gm(spec.constant("w_in_a"));
  t.gm_q_a = gm(w[0]);
  t.gm_1_a = gm(w[1]);
  t.gm_2_a = gm(w[2]);
  t.go_a = lambda * mirror_current(w[1], spec);
  t.gm_q_b = gm(w[3]);
  t.gm_b = gm(w[4]);
  t.go_b = lambda * mirror_current(w[4], spec);
  t.gm_in_b = gm(w[5]);
  t.c1a = spec.constant("c1_a");
  t.c2a = spec.constant("c2_a");
  t.c1b = spec.constant("c1_b");
  t.c2b = spec.constant("c2_b");
  return t;
}

inline std::complex<double> transfer(const Transconductances& t, double f) {
  const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f);
  const auto za = t.c2a * s + t.go_a;
  const auto ha = t.gm_in_a * za / ((t.c1a * s + t.gm_q_a) * za + t.gm_1_a * t.gm_2_a);
  const auto zb = t.c2b * s + t.go_b;
  const auto hb = t.gm_in_b * zb / ((t.c1b * s + t.gm_q_b) * zb + t.gm_b * t.gm_b);
  return ha * hb;
}

inline ResponseCurve frequency_response(const CircuitSpec& spec, std::span<const double> params,
                                        const SamplingGrid& grid) {
  const auto t = transconductances(spec, params);
  auto xs = grid.points();
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = to_db(std::abs(transfer(t, xs[i])));
  return {Axis::FrequencyHzLog, YUnit::Decibel, std::move(xs), std::move(ys)};
}

}  // namespace anlock::bpf
