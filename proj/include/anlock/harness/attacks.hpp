#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "anlock/ga/engine.hpp"
#include "anlock/harness/oracle.hpp"

namespace anlock {

/// GA settings for attacks: real genes mutate over six decades of step size.
inline ga::GAConfig attack_ga_defaults() {
  ga::GAConfig c;
  c.real_step_decades = 6.0;
  c.max_wall_s = 600.0;
  return c;
}

struct AttackSettings {
  ga::GAConfig ga = attack_ga_defaults();
  double match_tolerance = kMatchTolerance;  // relative L2 for a key to count as unlocking
  double case1_target = 1e-12;               // Case 1 halts at F <= case1_target * sum E^2
  double hint_tolerance = 1e-3;              // dead band of the width-hint criterion
  bool scale_selection = true;               // roulette sees F in units of the halting target
};

inline double oracle_energy(const OracleBundle& oracle) {
  double e = 0.0;
  for (const auto& c : oracle.ordered()) e += squared_norm(c);
  return e;
}

/// Residuals E - O of one observable for a candidate parameter vector.
inline ga::Criterion curve_criterion(const std::string& name, const ResponseCurve& expected,
                                     const SamplingGrid& grid,
                                     std::function<ResponseCurve(const ga::Chromosome&,
                                                                 const SamplingGrid&)> sim) {
  return {name, [expected, grid, sim = std::move(sim)](const ga::Chromosome& c) {
            const auto observed = sim(c, grid);
            require_same_support(expected, observed);
            ga::Residuals r(expected.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = expected.y()[i] - observed.y()[i];
            return r;
          }};
}

/// Real-gene search bounds per slot: one column on, up to every column on.
inline void width_bounds(const LockedView& view, std::vector<double>& lower,
                         std::vector<double>& upper) {
  lower.clear();
  upper.clear();
  for (const auto& g : view.grids) {
    lower.push_back(g.min_width());
    upper.push_back(g.total_width());
  }
}

struct Case1Result {
  ParamVector widths;
  double relative_distance = INFINITY;
  ga::GaResult ga;
  bool converged() const { return ga.reached_target(); }
};

/// Case 1: the key grids are replaced by single transistors whose widths are
/// evolved as real genes against the oracle curves.
inline Case1Result run_case1(const LockedView& view, const OracleBundle& oracle,
                             const AttackSettings& settings,
                             std::vector<ga::Chromosome> seeds = {}) {
  const auto& design = view.design;
  auto cfg = settings.ga;
  if (cfg.lower.empty()) width_bounds(view, cfg.lower, cfg.upper);
  cfg.target_fitness = settings.case1_target * oracle_energy(oracle);
  if (settings.scale_selection) cfg.selection_unit = cfg.target_fitness;
  ga::FitnessFunction ff;
  for (const auto& name : observable_names(design.kind))
    ff.criteria.push_back(curve_criterion(
        name, oracle.curves.at(name), oracle.grids.at(name),
        [&design](const ga::Chromosome& c, const SamplingGrid& g) { return simulate(design, c.reals, g); }));
  Case1Result r;
  r.ga = ga::run_ga(cfg, ga::Encoding::Real, view.grids.size(), ff, std::move(seeds));
  r.widths = r.ga.best.reals;
  r.relative_distance = relative_distance(oracle.ordered(), simulate_observables(design, r.widths));
  return r;
}

/// Key bits the GA evolves; the rest are held at `fixed`. Slots with a
/// finite entry in `slot_widths` are simulated at that width instead of
/// their grid's.
struct KeySpace {
  std::vector<int> free_bits;
  Key fixed;
  std::vector<double> slot_widths;

  static KeySpace all(std::size_t k) {
    KeySpace s{{}, Key(k), {}};
    for (std::size_t i = 0; i < k; ++i) s.free_bits.push_back(static_cast<int>(i));
    return s;
  }

  Key expand(const ga::Chromosome& c) const {
    Key key = fixed;
    for (std::size_t i = 0; i < free_bits.size(); ++i) key.set(free_bits[i], c.bits[i]);
    return key;
  }

  ParamVector widths(const LockedView& view, const Key& key) const {
    auto w = locked_widths(view, key);
    for (std::size_t s = 0; s < slot_widths.size() && s < w.size(); ++s)
      if (std::isfinite(slot_widths[s])) w[s] = slot_widths[s];
    return w;
  }

  std::vector<ResponseCurve> observables(const LockedView& view, const Key& key) const {
    const auto w = widths(view, key);
    for (double x : w)
      if (!(x > 0.0)) throw DegenerateModel("a slot conducts no current");
    return simulate_observables(view.design, w);
  }
};

/// Dead-band relative width residual: zero while |W - W_hint| <= tol * W_hint.
inline double hint_residual(double width, double hint, double tol) {
  const double rel = std::abs(width - hint) / hint;
  return std::max(0.0, rel - tol) / tol;
}

struct Case2Result {
  Key key;
  double relative_distance = INFINITY;
  bool matches = false;  // key reproduces the oracle within the match tolerance
  ga::GaResult ga;
};

/// Case 2: binary key search. Criteria are the oracle curves plus, when a
/// hint is given, per-slot width residuals (NaN entries are skipped).
inline Case2Result run_case2_ga(const LockedView& view, const OracleBundle& oracle,
                                const AttackSettings& settings,
                                const std::optional<ParamVector>& w_hint = std::nullopt,
                                std::optional<KeySpace> space = std::nullopt) {
  const KeySpace ks = space ? *space : KeySpace::all(view.k);
  auto cfg = settings.ga;
  cfg.target_fitness =
      settings.match_tolerance * settings.match_tolerance * oracle_energy(oracle);
  ga::FitnessFunction ff;
  for (const auto& name : observable_names(view.design.kind))
    ff.criteria.push_back(curve_criterion(
        name, oracle.curves.at(name), oracle.grids.at(name),
        [&view, &ks](const ga::Chromosome& c, const SamplingGrid& g) {
          const auto w = ks.widths(view, ks.expand(c));
          for (double x : w)
            if (!(x > 0.0)) throw DegenerateModel("a slot conducts no current");
          return simulate(view.design, w, g);
        }));
  if (w_hint) {
    if (w_hint->size() != view.grids.size()) throw InvalidParams("one width hint per slot required");
    ff.criteria.push_back({"width_hint", [&view, &ks, hint = *w_hint,
                                          tol = settings.hint_tolerance](const ga::Chromosome& c) {
                             const auto w = ks.widths(view, ks.expand(c));
                             ga::Residuals r;
                             for (std::size_t s = 0; s < w.size(); ++s)
                               if (!std::isnan(hint[s])) r.push_back(hint_residual(w[s], hint[s], tol));
                             return r;
                           }});
  }
  Case2Result r;
  r.ga = ga::run_ga(cfg, ga::Encoding::Binary, ks.free_bits.size(), ff);
  r.key = ks.expand(r.ga.best);
  try {
    r.relative_distance = relative_distance(oracle.ordered(), ks.observables(view, r.key));
    r.matches = r.relative_distance <= settings.match_tolerance;
  } catch (const DegenerateModel&) {
  }
  return r;
}

}  // namespace anlock
