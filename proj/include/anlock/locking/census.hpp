#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "anlock/locking/locked.hpp"

namespace anlock {

struct CensusResult {
  std::uint64_t examined = 0;
  std::uint64_t matching = 0;
  std::uint64_t degenerate = 0;
  bool exhaustive = true;
  std::vector<Key> matches;  // first `keep` matching keys in enumeration order

  /// Estimated number of matching keys in the full 2^k space.
  double estimated_total(std::size_t k) const {
    if (exhaustive) return static_cast<double>(matching);
    return static_cast<double>(matching) / static_cast<double>(examined) * std::ldexp(1.0, static_cast<int>(k));
  }
};

struct CensusOptions {
  double tolerance = kMatchTolerance;
  std::size_t max_exhaustive_bits = 24;
  std::uint64_t samples = 1u << 20;  // used when k exceeds max_exhaustive_bits
  std::uint64_t seed = 1;
  std::size_t keep = 256;
  std::optional<std::uint64_t> stop_after;  // stop once this many keys matched
};

/// Counts keys whose response matches `oracle` within tolerance. Exhaustive up
/// to `max_exhaustive_bits`, uniform sampling beyond. Simulations are shared
/// between keys that select the same width vector.
inline CensusResult key_census(const LockedView& view, const std::vector<ResponseCurve>& oracle,
                               const CensusOptions& opt = {}) {
  CensusResult r;
  enum class Outcome { Miss, Hit, Degenerate };
  std::map<ParamVector, Outcome> memo;
  auto classify = [&](const ParamVector& w) {
    for (double x : w)
      if (!(x > 0.0)) return Outcome::Degenerate;
    try {
      return curves_match(oracle, simulate_observables(view.design, w), opt.tolerance)
                 ? Outcome::Hit
                 : Outcome::Miss;
    } catch (const DegenerateModel&) {
      return Outcome::Degenerate;
    }
  };
  auto visit = [&](const Key& key) {
    ++r.examined;
    const auto w = locked_widths(view, key);
    auto it = memo.find(w);
    if (it == memo.end()) it = memo.emplace(w, classify(w)).first;
    r.degenerate += it->second == Outcome::Degenerate;
    const bool hit = it->second == Outcome::Hit;
    if (hit) {
      ++r.matching;
      if (r.matches.size() < opt.keep) r.matches.push_back(key);
    }
    return !(opt.stop_after && r.matching >= *opt.stop_after);
  };

  if (view.k <= opt.max_exhaustive_bits) {
    const std::uint64_t total = std::uint64_t{1} << view.k;
    for (std::uint64_t i = 0; i < total; ++i)
      if (!visit(Key::from_integer(i, view.k))) break;
    r.exhaustive = r.examined == total;
  } else {
    Rng rng(opt.seed);
    r.exhaustive = false;
    for (std::uint64_t i = 0; i < opt.samples; ++i)
      if (!visit(Key::random(view.k, rng))) break;
  }
  return r;
}

}  // namespace anlock
