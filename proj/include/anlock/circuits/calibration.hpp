#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "anlock/circuits/metrics.hpp"

namespace anlock {

/// Published characterisations the nominal benchmarks are tuned to.
namespace targets {
inline constexpr double ota_gain_db = 41.0;
inline constexpr double ota_ugf_hz = 1.2e9;
inline constexpr double bpf_peak_db = 0.0;
inline constexpr double bpf_center_hz = 250e3;
inline constexpr double bpf_bw_hz = 150e3;
inline constexpr double pll_lock_hz = 1.8e9;
inline constexpr double pll_settle_s = 920e-9;
inline constexpr double twg_amplitude_v = 1.0;
inline constexpr double twg_period_s = 2e-6;
inline constexpr double receiver_if_hz = 200e6;
}  // namespace targets

namespace detail {

inline constexpr double kIRef = 10e-6;
inline constexpr double kWRef = 1e-6;

inline CircuitSpec base_spec() {
  CircuitSpec s;
  s.i_ref = kIRef;
  s.constants["w_ref"] = kWRef;
  return s;
}

inline void record_design_currents(CircuitModel& m) {
  const auto names = param_names(m.kind());
  for (std::size_t i = 0; i < names.size(); ++i)
    m.design.spec.design_targets["i_" + names[i].substr(2)] =
        mirror_current(m.nominal_params[i], m.design.spec);
}

/// Monotone bisection: finds x in [lo, hi] with f(x) = target.
template <typename F>
double bisect(F&& f, double lo, double hi, double target, bool increasing) {
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = f(mid) > target;
    if (above == increasing)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Loop time constants for crossover omega_c and tau_z / tau_p ratio b.
inline void set_loop(CircuitSpec& s, double omega_c, double b) {
  s.constants["tau_z"] = std::sqrt(b) / omega_c;
  s.constants["tau_p"] = 1.0 / (std::sqrt(b) * omega_c);
  s.constants["loop_gain"] = omega_c * omega_c / std::sqrt(b);
}

inline constexpr double kLoopRatio = 12.0;

/// Crossover frequency (rad/s) that yields the target 1% settling time.
inline double loop_crossover() {
  CircuitSpec unit = base_spec();
  set_loop(unit, 1.0, kLoopRatio);
  const double settle_at_unity = pll::settling_time(pll::loop_from_spec(unit));
  return settle_at_unity / targets::pll_settle_s;
}

inline void add_pll_constants(CircuitSpec& s, double w_vco) {
  s.constants["r_bias"] = 10e3;
  const double v = s.constants["r_bias"] * w_vco / kWRef * kIRef;
  s.constants["k_vco"] = targets::pll_lock_hz / v;
  set_loop(s, loop_crossover(), kLoopRatio);
}

}  // namespace detail

/// OTA: beta fixed, lambda solved for the DC gain, load capacitance for the
/// unity-gain frequency. Both closed form.
inline CircuitModel calibrate_ota() {
  CircuitModel m;
  m.design.kind = CircuitKind::OTA;
  m.nominal_params = {4.8e-6};
  auto& s = m.design.spec;
  s = detail::base_spec();
  s.constants["beta"] = 2e-3;
  const double i = mirror_current(m.nominal_params[0], s);
  const double a0 = std::pow(10.0, targets::ota_gain_db / 20.0);
  const double gm = std::sqrt(2.0 * s.constants["beta"] * i);
  const double lambda = gm / (a0 * i);
  s.constants["lambda"] = lambda;
  s.constants["c_load"] =
      lambda * i * std::sqrt(a0 * a0 - 1.0) / (2.0 * std::numbers::pi * targets::ota_ugf_hz);
  m.design.grids["frequency"] = SamplingGrid::log_frequency(1e6, 1e10);
  detail::record_design_currents(m);
  return m;
}

inline constexpr double kBpfStagger = 1.2;
inline constexpr double kBpfQRatio = 2.0;

/// BPF: stagger-tuned sections at w0 / s and w0 * s with quality factors Q and
/// Q * r. Nested bisection tunes Q for the bandwidth and w0 for the
/// centre; the fixed input OTA width then sets the 0 dB peak.
inline CircuitModel calibrate_bpf() {
  CircuitModel m;
  m.design.kind = CircuitKind::BPF;
  m.nominal_params = {2.0e-6, 3.0e-6, 2.5e-6, 2.2e-6, 2.8e-6, 1.5e-6};
  m.design.grids["frequency"] = SamplingGrid::log_frequency(2.5e3, 25e6);
  auto& s = m.design.spec;
  s = detail::base_spec();
  s.constants["beta"] = 2e-4;
  s.constants["lambda"] = 0.2;
  s.constants["w_in_a"] = 2.0e-6;
  const auto& w = m.nominal_params;
  auto gm = [&](double width) { return std::sqrt(2.0 * s.constants["beta"] * mirror_current(width, s)); };

  auto place = [&](double w0, double q) {
    const double wa = w0 / kBpfStagger;
    const double wb = w0 * kBpfStagger;
    const double qb = q * kBpfQRatio;
    s.constants["c1_a"] = gm(w[0]) * q / wa;
    s.constants["c2_a"] = gm(w[1]) * gm(w[2]) / (s.constants["c1_a"] * wa * wa);
    s.constants["c1_b"] = gm(w[3]) * qb / wb;
    s.constants["c2_b"] = gm(w[4]) * gm(w[4]) / (s.constants["c1_b"] * wb * wb);
  };
  auto measure = [&] { return characterize(m.design, m.nominal_params); };
  auto tune_center = [&](double q) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double w0 = detail::bisect(
        [&](double x) {
          place(x, q);
          return measure()["peak_hz"];
        },
        two_pi * 50e3, two_pi * 1.25e6, targets::bpf_center_hz, true);
    place(w0, q);
  };
  const double q = detail::bisect(
      [&](double x) {
        tune_center(x);
        return measure()["bw_hz"];
      },
      0.3, 10.0, targets::bpf_bw_hz, false);
  tune_center(q);
  const double peak = std::pow(10.0, measure()["peak_db"] / 20.0);
  s.constants["w_in_a"] /= peak * peak;
  detail::record_design_currents(m);
  return m;
}

/// PLL: control range and VCO gain for the locking frequency, loop time
/// scale for the settling time (settling scales exactly as 1 / omega_c).
inline CircuitModel calibrate_pll() {
  CircuitModel m;
  m.design.kind = CircuitKind::PLL;
  m.nominal_params = {6.0e-6};
  auto& s = m.design.spec;
  s = detail::base_spec();
  detail::add_pll_constants(s, m.nominal_params[0]);
  const double f_c = detail::loop_crossover() / (2.0 * std::numbers::pi);
  m.design.grids["transient"] = SamplingGrid::linear_time(5.0 * targets::pll_settle_s);
  m.design.grids["spectrum"] = SamplingGrid::log_frequency(f_c / 100.0, f_c * 100.0);
  detail::record_design_currents(m);
  return m;
}

/// TWG: comparator thresholds at +-amplitude, integrating capacitor for the period.
inline CircuitModel calibrate_twg() {
  CircuitModel m;
  m.design.kind = CircuitKind::TWG;
  m.nominal_params = {5.0e-6, 5.0e-6};
  auto& s = m.design.spec;
  s = detail::base_spec();
  s.constants["v_low"] = -targets::twg_amplitude_v;
  s.constants["v_high"] = targets::twg_amplitude_v;
  const double swing = 2.0 * targets::twg_amplitude_v;
  const double i1 = mirror_current(m.nominal_params[0], s);
  const double i2 = mirror_current(m.nominal_params[1], s);
  s.constants["c_int"] = targets::twg_period_s / (swing / i1 + swing / i2);
  m.design.grids["transient"] = SamplingGrid::linear_time(5.0 * targets::twg_period_s);
  detail::record_design_currents(m);
  return m;
}

/// Receiver: embedded PLL identical to the PLL benchmark; preselector tuned to
/// f_LO + f_IF, 40 MHz IF bandwidth, 20 dB output amplifier.
inline CircuitModel calibrate_receiver() {
  CircuitModel m;
  m.design.kind = CircuitKind::Receiver;
  m.nominal_params = {6.0e-6, 4.0e-6, 3.0e-6, 5.0e-6};
  auto& s = m.design.spec;
  s = detail::base_spec();
  detail::add_pll_constants(s, m.nominal_params[0]);
  const double f_rf = targets::pll_lock_hz + targets::receiver_if_hz;
  s.constants["f_if"] = targets::receiver_if_hz;
  s.constants["pre_q"] = 8.0;
  s.constants["pre_k"] = f_rf / std::sqrt(mirror_current(m.nominal_params[1], s));
  s.constants["if_k"] = 40e6 / std::sqrt(mirror_current(m.nominal_params[2], s));
  s.constants["amp_k"] = 10.0 / std::sqrt(mirror_current(m.nominal_params[3], s));
  s.constants["mixer_gain"] = 1.0;
  m.design.grids["frequency"] = SamplingGrid::log_frequency(1.4e9, 2.6e9);
  detail::record_design_currents(m);
  return m;
}

inline CircuitModel calibrate(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::OTA: return calibrate_ota();
    case CircuitKind::BPF: return calibrate_bpf();
    case CircuitKind::PLL: return calibrate_pll();
    case CircuitKind::TWG: return calibrate_twg();
    case CircuitKind::Receiver: return calibrate_receiver();
  }
  throw InvalidParams("unknown circuit kind");
}

inline const std::vector<CircuitKind>& all_kinds() {
  static const std::vector<CircuitKind> kinds{CircuitKind::OTA, CircuitKind::BPF, CircuitKind::PLL,
                                              CircuitKind::TWG, CircuitKind::Receiver};
  return kinds;
}

}  // namespace anlock
