#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "anlock/circuits/model.hpp"

namespace anlock::pll {

using cplx = std::complex<double>;

/// Type-II third-order charge-pump loop.
///
/// Open loop G(s) = K (1 + s tau_z) / (s^2 (1 + s tau_p)); the control voltage
/// follows the closed-loop step response of G / (1 + G), scaled by the control
/// range V = r_bias * I_vco that the locked VCO mirror sets. The locking
/// frequency is k_vco * V, so it grows linearly with the VCO bias width.
struct Loop {
  double gain;   // K
  double tau_z;
  double tau_p;
  std::array<cplx, 3> poles;
  std::array<cplx, 3> residues;  // step response: y(t) = 1 + sum r_i exp(p_i t)
};

inline cplx numerator(const Loop& l, cplx s) { return l.gain * (1.0 + s * l.tau_z); }
inline cplx denominator(const Loop& l, cplx s) {
  return ((l.tau_p * s + 1.0) * s + l.gain * l.tau_z) * s + l.gain;
}

/// Roots of the monic cubic s^3 + a s^2 + b s + c (Durand-Kerner).
inline std::array<cplx, 3> cubic_roots(double a, double b, double c) {
  auto p = [&](cplx s) { return ((s + a) * s + b) * s + c; };
  const double scale = std::max({std::abs(a), std::sqrt(std::abs(b)), std::cbrt(std::abs(c)), 1e-300});
  const cplx seed(0.4, 0.9);
  std::array<cplx, 3> z{scale * seed, scale * seed * seed, scale * seed * seed * seed};
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      cplx denom = 1.0;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      const cplx step = p(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step) / scale);
    }
    if (change < 1e-15) break;
  }
  return z;
}

inline Loop make_loop(double gain, double tau_z, double tau_p) {
  if (!(gain > 0.0) || !(tau_z > 0.0) || !(tau_p > 0.0))
    throw DegenerateModel("loop constants must be positive");
  Loop l{gain, tau_z, tau_p, {}, {}};
  l.poles = cubic_roots(1.0 / tau_p, gain * tau_z / tau_p, gain / tau_p);
  for (std::size_t i = 0; i < 3; ++i) {
    const cplx p = l.poles[i];
    if (!(p.real() < 0.0)) throw DegenerateModel("closed loop is not stable");
    const cplx d_prime = (3.0 * tau_p * p + 2.0) * p + gain * tau_z;
    l.residues[i] = numerator(l, p) / (p * d_prime);
  }
  return l;
}

inline Loop loop_from_spec(const CircuitSpec& spec) {
  return make_loop(spec.constant("loop_gain"), spec.constant("tau_z"), spec.constant("tau_p"));
}

/// Normalised control-voltage step response (final value 1).
inline double step_response(const Loop& l, double t) {
  cplx acc = 1.0;
  for (std::size_t i = 0; i < 3; ++i) acc += l.residues[i] * std::exp(l.poles[i] * t);
  return acc.real();
}

/// Step response at every grid point. Linear grids advance each pole term by
/// a constant factor, re-anchored with a direct exponential every 64 samples.
inline std::vector<double> step_response(const Loop& l, const SamplingGrid& grid,
                                         const std::vector<double>& ts) {
  std::vector<double> ys(ts.size());
  if (grid.spacing != Spacing::Linear) {
    for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = step_response(l, ts[i]);
    return ys;
  }
  const double dt = (grid.stop - grid.start) / static_cast<double>(grid.count - 1);
  std::array<cplx, 3> term{};
  std::array<cplx, 3> factor{};
  for (std::size_t p = 0; p < 3; ++p) factor[p] = std::exp(l.poles[p] * dt);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    cplx acc = 1.0;
    for (std::size_t p = 0; p < 3; ++p) {
      term[p] = i % 64 == 0 ? l.residues[p] * std::exp(l.poles[p] * ts[i]) : term[p] * factor[p];
      acc += term[p];
    }
    ys[i] = acc.real();
  }
  return ys;
}

inline cplx closed_loop(const Loop& l, double f) {
  const cplx s(0.0, 2.0 * std::numbers::pi * f);
  return numerator(l, s) / denominator(l, s);
}

/// First time after which the response stays within +-tol of its final value.
inline double settling_time(const Loop& l, double tol = 0.01) {
  double slowest = INFINITY;
  for (const auto& p : l.poles) slowest = std::min(slowest, -p.real());
  const double horizon = 60.0 / slowest;
  constexpr int steps = 200000;
  const double dt = horizon / steps;
  auto outside = [&](double t) { return std::abs(step_response(l, t) - 1.0) >= tol; };
  int last = -1;
  for (int i = steps; i >= 0; --i) {
    if (outside(dt * i)) {
      last = i;
      break;
    }
  }
  if (last == steps) throw DegenerateModel("loop does not settle within the horizon");
  if (last < 0) return 0.0;
  double lo = dt * last;
  double hi = dt * (last + 1);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (outside(mid) ? lo : hi) = mid;
  }
  return hi;
}

inline double control_range(const CircuitSpec& spec, double width) {
  return spec.constant("r_bias") * mirror_current(width, spec);
}

inline double lock_frequency(const CircuitSpec& spec, double width) {
  return spec.constant("k_vco") * control_range(spec, width);
}

/// Control-voltage settling transient.
inline ResponseCurve transient(const CircuitSpec& spec, std::span<const double> params,
                               const SamplingGrid& grid) {
  const auto loop = loop_from_spec(spec);
  const double v = control_range(spec, params[0]);
  auto ts = grid.points();
  auto ys = step_response(loop, grid, ts);
  for (double& y : ys) y *= v;
  return {Axis::TimeS, YUnit::Volt, std::move(ts), std::move(ys)};
}

/// Control-voltage spectrum: |V * H(j 2 pi f)| in dB.
inline ResponseCurve spectrum(const CircuitSpec& spec, std::span<const double> params,
                              const SamplingGrid& grid) {
  const auto loop = loop_from_spec(spec);
  const double v = control_range(spec, params[0]);
  auto fs = grid.points();
  std::vector<double> ys(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) ys[i] = to_db(v * std::abs(closed_loop(loop, fs[i])));
  return {Axis::FrequencyHzLog, YUnit::Decibel, std::move(fs), std::move(ys)};
}

}  // namespace anlock::pll
