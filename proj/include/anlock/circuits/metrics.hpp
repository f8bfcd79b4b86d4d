#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <string>

#include "anlock/circuits/simulate.hpp"

namespace anlock {

/// Named scalar characterisation of a response (gain, centre frequency, ...).
using Metrics = std::map<std::string, double>;

struct Peak {
  double freq_hz;
  double magnitude;
};

/// Maximum of a unimodal-near-the-top magnitude on [lo, hi]: dense log scan
/// followed by golden-section refinement in log frequency.
inline Peak find_peak(const std::function<double(double)>& mag, double lo, double hi) {
  constexpr int scan = 4000;
  const double a = std::log(lo);
  const double b = std::log(hi);
  int best = 0;
  double best_mag = -1.0;
  for (int i = 0; i <= scan; ++i) {
    const double m = mag(std::exp(a + (b - a) * i / scan));
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  double left = a + (b - a) * std::max(best - 1, 0) / scan;
  double right = a + (b - a) * std::min(best + 1, scan) / scan;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - g * (right - left);
  double x2 = left + g * (right - left);
  double f1 = mag(std::exp(x1));
  double f2 = mag(std::exp(x2));
  for (int it = 0; it < 200 && right - left > 1e-14; ++it) {
    if (f1 < f2) {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + g * (right - left);
      f2 = mag(std::exp(x2));
    } else {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - g * (right - left);
      f1 = mag(std::exp(x1));
    }
  }
  const double x = 0.5 * (left + right);
  return {std::exp(x), mag(std::exp(x))};
}

/// Frequency between `inside` and `outside` where mag crosses `level`.
inline double find_crossing(const std::function<double(double)>& mag, double inside,
                            double outside, double level) {
  double a = std::log(inside);
  double b = std::log(outside);
  if (mag(outside) > level) throw DegenerateModel("response never drops below the band edge");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    (mag(std::exp(mid)) > level ? a : b) = mid;
  }
  return std::exp(0.5 * (a + b));
}

/// Peak plus -3 dB bandwidth of a band-pass magnitude.
inline Metrics band_metrics(const std::function<double(double)>& mag, double lo, double hi) {
  const Peak p = find_peak(mag, lo, hi);
  const double edge = p.magnitude / std::numbers::sqrt2;
  const double f_lo = find_crossing(mag, p.freq_hz, lo, edge);
  const double f_hi = find_crossing(mag, p.freq_hz, hi, edge);
  return {{"peak_hz", p.freq_hz}, {"peak_db", to_db(p.magnitude)}, {"bw_hz", f_hi - f_lo}};
}

/// Characterisation metrics of a circuit at the given parameters.
inline Metrics characterize(const ModelDesign& design, std::span<const double> params) {
  validate_params(design.kind, params);
  const auto& spec = design.spec;
  switch (design.kind) {
    case CircuitKind::OTA: {
      const auto op = ota::operating_point(spec, params[0]);
      return {{"gain_db", to_db(op.dc_gain)}, {"ugf_hz", ota::unity_gain_hz(op)}};
    }
    case CircuitKind::BPF: {
      const auto t = bpf::transconductances(spec, params);
      const auto& g = design.grid("frequency");
      return band_metrics([&](double f) { return std::abs(bpf::transfer(t, f)); }, g.start,
                          g.stop);
    }
    case CircuitKind::PLL: {
      const auto m = simulate_pll_metrics(design, params);
      return {{"f_locking_hz", m.f_locking_hz}, {"t_settle_s", m.t_settle_s}};
    }
    case CircuitKind::TWG: {
      const auto w = twg::waveform(spec, params);
      return {{"amplitude_v", w.amplitude()},
              {"period_s", w.period()},
              {"rise_s", w.rise_s},
              {"fall_s", w.fall_s}};
    }
    case CircuitKind::Receiver: {
      const auto c = receiver::chain(spec, params);
      // Search the upper sideband only; the image is attenuated by the preselector.
      const double lo = c.f_lo + 0.25 * c.f_if;
      const double hi = c.f_lo + 4.0 * c.f_if;
      auto m = band_metrics([&](double f) { return receiver::magnitude(c, f); }, lo, hi);
      return {{"center_hz", m["peak_hz"]}, {"peak_db", m["peak_db"]}, {"bw_hz", m["bw_hz"]}};
    }
  }
  return {};
}

}  // namespace anlock
