#pragma once

#include <chrono>
#include <map>
#include <vector>

#include "anlock/smt/enumerate.hpp"

namespace anlock::smt {

struct CheckedKey {
  Key key;
  double width_residual = 0.0;
  double curve_distance = INFINITY;  // relative L2 to the oracle, inf when degenerate
};

struct BruteCheckResult {
  std::vector<CheckedKey> checked;    // every candidate, in candidate order
  std::vector<CheckedKey> survivors;  // distance <= tolerance, ascending
  std::size_t simulations = 0;        // distinct width vectors simulated
  double seconds = 0.0;

  bool no_match() const { return survivors.empty(); }
  double seconds_per_candidate() const {
    return checked.empty() ? 0.0 : seconds / static_cast<double>(checked.size());
  }
};

/// Simulates every candidate through the locked netlist and keeps those that
/// reproduce the oracle curves.
inline BruteCheckResult brute_check(const CandidateKeySet& candidates, const LockedView& view,
                                    const std::vector<ResponseCurve>& oracle_curves,
                                    double tolerance = kMatchTolerance) {
  if (candidates.empty()) throw NoMatch("no candidate keys to check");
  const auto start = std::chrono::steady_clock::now();
  BruteCheckResult r;
  std::map<ParamVector, double> memo;
  for (const auto& c : candidates.candidates) {
    const auto w = locked_widths(view, c.key);
    auto it = memo.find(w);
    if (it == memo.end()) {
      double d = INFINITY;
      try {
        if (!key_is_degenerate(view, c.key))
          d = relative_distance(oracle_curves, simulate_observables(view.design, w));
      } catch (const DegenerateModel&) {
      }
      ++r.simulations;
      it = memo.emplace(w, d).first;
    }
    r.checked.push_back({c.key, c.total_residual, it->second});
    if (it->second <= tolerance) r.survivors.push_back(r.checked.back());
  }
  std::stable_sort(r.survivors.begin(), r.survivors.end(),
                   [](const CheckedKey& a, const CheckedKey& b) { return a.curve_distance < b.curve_distance; });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace anlock::smt
