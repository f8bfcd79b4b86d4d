#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "anlock/core/random.hpp"
#include "anlock/ga/chromosome.hpp"

namespace anlock::ga {

/// Roulette score for minimisation.
inline double selection_score(double fitness) { return 1.0 / (1.0 + fitness); }

/// Samples `count` members with replacement, probability proportional to
/// 1 / (1 + F / unit). Falls back to uniform when every score is zero.
inline std::vector<std::size_t> roulette_select_indices(const std::vector<Chromosome>& pop,
                                                        std::size_t count, Rng& rng,
                                                        double unit = 1.0) {
  std::vector<double> cumulative(pop.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    total += selection_score(pop[i].score() / unit);
    cumulative[i] = total;
  }
  std::vector<std::size_t> picks(count);
  for (auto& p : picks) {
    if (!(total > 0.0)) {
      p = rng.below(pop.size());
      continue;
    }
    const double r = rng.uniform() * total;
    p = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                                 cumulative.begin());
    p = std::min(p, pop.size() - 1);
  }
  return picks;
}

inline std::vector<Chromosome> roulette_select(const std::vector<Chromosome>& pop,
                                               std::size_t count, Rng& rng, double unit = 1.0) {
  std::vector<Chromosome> out;
  for (auto i : roulette_select_indices(pop, count, rng, unit)) out.push_back(pop[i]);
  return out;
}

/// Cut point: floor(L/2), or the block boundary closest to it.
inline std::size_t crossover_cut(std::size_t length, const std::vector<std::size_t>& blocks = {}) {
  const std::size_t half = length / 2;
  if (blocks.empty()) return half;
  std::size_t best = half;
  std::size_t best_gap = length + 1;
  std::size_t edge = 0;
  for (std::size_t b : blocks) {
    edge += b;
    if (edge == 0 || edge >= length) continue;
    const std::size_t gap = edge > half ? edge - half : half - edge;
    if (gap < best_gap) best = edge, best_gap = gap;
  }
  return best;
}

/// Genes from `cut` onward are swapped. Offspring take the older parent's age.
inline std::pair<Chromosome, Chromosome> crossover_single_point(const Chromosome& a,
                                                                const Chromosome& b,
                                                                std::size_t cut) {
  if (a.encoding != Encoding::Binary || b.encoding != Encoding::Binary)
    throw EncodingMismatch("crossover is defined for binary chromosomes only");
  if (a.bits.size() != b.bits.size()) throw EncodingMismatch("parents differ in length");
  Chromosome x = a;
  Chromosome y = b;
  for (std::size_t i = cut; i < a.bits.size(); ++i) std::swap(x.bits[i], y.bits[i]);
  x.age = y.age = std::max(a.age, b.age);
  x.fitness.reset();
  y.fitness.reset();
  return {std::move(x), std::move(y)};
}

inline std::pair<Chromosome, Chromosome> crossover_single_point(const Chromosome& a,
                                                                const Chromosome& b) {
  return crossover_single_point(a, b, crossover_cut(a.bits.size()));
}

struct RealMutation {
  double step = 0.05;
  double rate_multiplier = 5.0;
  double decades = 0.0;
  const std::vector<double>* lower = nullptr;
  const std::vector<double>* upper = nullptr;
};

/// Binary: independent bit flips with probability p_m. Real: with probability
/// rate_multiplier * p_m a gene is scaled by a factor uniform in
/// [1 - step, 1 + step], then clamped to its bounds. With `decades` > 0 the
/// distance |factor - 1| is log-uniform on [step * 10^-decades, step] instead.
inline Chromosome mutate(Chromosome c, double p_m, Rng& rng, const RealMutation& real = {}) {
  bool changed = false;
  if (c.encoding == Encoding::Binary) {
    for (auto& b : c.bits)
      if (rng.bernoulli(p_m)) b ^= 1, changed = true;
  } else {
    const double p = std::min(1.0, real.rate_multiplier * p_m);
    const double shared = real.decades > 0.0 ? real.step * std::pow(10.0, -real.decades * rng.uniform()) : 0.0;
    for (std::size_t i = 0; i < c.reals.size(); ++i) {
      if (!rng.bernoulli(p)) continue;
      double factor = real.decades > 0.0 ? 1.0 + shared * rng.uniform(-1.0, 1.0)
                                         : rng.uniform(1.0 - real.step, 1.0 + real.step);
      double v = c.reals[i] * factor;
      if (real.lower && real.upper) v = std::clamp(v, (*real.lower)[i], (*real.upper)[i]);
      changed = changed || v != c.reals[i];
      c.reals[i] = v;
    }
  }
  if (changed) c.fitness.reset();
  return c;
}

/// a dominates b: no worse in fitness and age, strictly better in one.
inline bool dominates(const Chromosome& a, const Chromosome& b) {
  const bool no_worse = a.score() <= b.score() && a.age <= b.age;
  return no_worse && (a.score() < b.score() || a.age < b.age);
}

/// Pareto tournaments on (fitness, age): draw two distinct members and drop a
/// dominated one, until `target` remain. After `draw_limit` draws without a
/// dominated pair, the less fit of the next pair is dropped (older on ties).
inline std::vector<Chromosome> age_fitness_pareto_survival(std::vector<Chromosome> pop,
                                                           std::size_t target, Rng& rng,
                                                           std::size_t draw_limit = 0) {
  if (target == 0) throw InvalidConfig("survival target must be positive");
  if (draw_limit == 0) draw_limit = 4 * pop.size();
  std::size_t misses = 0;
  while (pop.size() > target) {
    const std::size_t i = rng.below(pop.size());
    std::size_t j = rng.below(pop.size() - 1);
    if (j >= i) ++j;
    std::size_t drop = pop.size();
    if (dominates(pop[i], pop[j])) drop = j;
    else if (dominates(pop[j], pop[i])) drop = i;
    else if (++misses > draw_limit) {
      const auto& a = pop[i];
      const auto& b = pop[j];
      if (a.score() != b.score()) drop = a.score() > b.score() ? i : j;
      else drop = a.age >= b.age ? i : j;
    }
    if (drop == pop.size()) continue;
    pop.erase(pop.begin() + static_cast<std::ptrdiff_t>(drop));
    misses = 0;
  }
  return pop;
}

}  // namespace anlock::ga
