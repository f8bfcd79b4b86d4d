#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "anlock/ga/config.hpp"
#include "anlock/ga/fitness.hpp"
#include "anlock/ga/operators.hpp"

namespace anlock::ga {

enum class HaltReason { Target, Generations, WallTime };

inline std::string_view to_string(HaltReason h) {
  switch (h) {
    case HaltReason::Target: return "target";
    case HaltReason::Generations: return "generations";
    case HaltReason::WallTime: return "time";
  }
  return "?";
}

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;  // best so far
  double mean = 0.0;  // over members with finite fitness
  double std = 0.0;
  Chromosome best_chromosome;
  double elapsed_s = 0.0;
  bool survival_active = false;
  std::vector<std::size_t> ages;  // population ages, in population order
};

struct GaResult {
  Chromosome best;
  std::vector<GenerationStats> trace;
  HaltReason halt = HaltReason::Generations;
  std::size_t evaluations = 0;

  std::size_t generations() const { return trace.empty() ? 0 : trace.back().generation; }
  bool reached_target() const { return halt == HaltReason::Target; }

  const Chromosome& require_target() const {
    if (!reached_target())
      throw BudgetExhausted("GA stopped on " + std::string(to_string(halt)) +
                            " with best fitness " + std::to_string(best.score()));
    return best;
  }
};

/// `generation,best,mean,std,elapsed_s`
inline void write_trace_csv(std::ostream& os, const std::vector<GenerationStats>& trace) {
  os << "generation,best,mean,std,elapsed_s\n" << std::setprecision(12);
  for (const auto& s : trace)
    os << s.generation << ',' << s.best << ',' << s.mean << ',' << s.std << ',' << s.elapsed_s
       << '\n';
}

inline std::string trace_csv(const std::vector<GenerationStats>& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

namespace detail {

class Evaluator {
 public:
  Evaluator(const FitnessFunction& ff, bool cache) : ff_(ff), cache_(cache) {}

  void operator()(Chromosome& c) {
    if (c.evaluated()) return;
    if (cache_ && c.encoding == Encoding::Binary) {
      if (auto it = memo_.find(c.bits); it != memo_.end()) {
        c.fitness = it->second;
        return;
      }
    }
    c.fitness = evaluate_fitness(ff_, c);
    ++count_;
    if (cache_ && c.encoding == Encoding::Binary) memo_.emplace(c.bits, *c.fitness);
  }

  std::size_t count() const { return count_; }

 private:
  const FitnessFunction& ff_;
  bool cache_;
  std::map<std::vector<std::uint8_t>, double> memo_;
  std::size_t count_ = 0;
};

inline Chromosome random_chromosome(Encoding enc, std::size_t length, const GAConfig& cfg,
                                    Rng& rng) {
  if (enc == Encoding::Binary) {
    std::vector<std::uint8_t> bits(length);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    return Chromosome::binary(std::move(bits));
  }
  if (cfg.lower.size() != length) throw InvalidConfig("real encoding needs bounds for every gene");
  std::vector<double> genes(length);
  for (std::size_t i = 0; i < length; ++i) {
    genes[i] = cfg.log_uniform_init
                   ? std::exp(rng.uniform(std::log(cfg.lower[i]), std::log(cfg.upper[i])))
                   : rng.uniform(cfg.lower[i], cfg.upper[i]);
  }
  return Chromosome::real(std::move(genes));
}

inline std::size_t best_index(const std::vector<Chromosome>& pop) {
  std::size_t b = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].score() < pop[b].score()) b = i;
  return b;
}

inline void fill_moments(GenerationStats& s, const std::vector<Chromosome>& pop) {
  double sum = 0.0;
  double sq = 0.0;
  std::size_t n = 0;
  for (const auto& c : pop)
    if (std::isfinite(c.score())) sum += c.score(), sq += c.score() * c.score(), ++n;
  if (n == 0) {
    s.mean = s.std = kFailedFitness;
    return;
  }
  s.mean = sum / n;
  s.std = std::sqrt(std::max(0.0, sq / n - s.mean * s.mean));
}

}  // namespace detail

/// Generational GA with elitism; once the best fitness has not improved for
/// `stagnation_window` generations, parents and offspring compete in
/// age-fitness Pareto survival and one random age-0 member joins each
/// generation. Deterministic for a given seed.
inline GaResult run_ga(const GAConfig& cfg, Encoding encoding, std::size_t length,
                       const FitnessFunction& ff, std::vector<Chromosome> seeds = {}) {
  cfg.validate();
  if (length == 0) throw InvalidConfig("chromosome length must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  Rng rng(cfg.seed);
  detail::Evaluator evaluate(ff, cfg.cache_fitness);
  const std::size_t n = cfg.population;
  const RealMutation real{cfg.real_step, cfg.real_rate_multiplier, cfg.real_step_decades,
                          &cfg.lower, &cfg.upper};
  const std::size_t cut = crossover_cut(length, cfg.crossover_blocks);

  std::vector<Chromosome> pop;
  for (auto& s : seeds) {
    if (pop.size() == n) break;
    if (s.encoding != encoding || s.length() != length)
      throw EncodingMismatch("seed chromosome does not match the encoding");
    s.fitness.reset();
    pop.push_back(std::move(s));
  }
  while (pop.size() < n) pop.push_back(detail::random_chromosome(encoding, length, cfg, rng));
  for (auto& c : pop) evaluate(c);

  GaResult result;
  result.best = pop[detail::best_index(pop)];
  std::size_t stagnant = 0;
  bool survival = false;

  auto record = [&](std::size_t g) {
    GenerationStats s;
    s.generation = g;
    s.best = result.best.score();
    detail::fill_moments(s, pop);
    s.best_chromosome = result.best;
    s.elapsed_s = elapsed();
    s.survival_active = survival;
    for (const auto& c : pop) s.ages.push_back(c.age);
    result.trace.push_back(std::move(s));
  };
  auto finish = [&](HaltReason h) {
    result.halt = h;
    result.evaluations = evaluate.count();
    return result;
  };

  record(0);
  if (result.best.score() <= cfg.target_fitness) return finish(HaltReason::Target);

  for (std::size_t g = 1; g <= cfg.max_generations; ++g) {
    if (cfg.max_wall_s > 0.0 && elapsed() >= cfg.max_wall_s) return finish(HaltReason::WallTime);

    const std::size_t keep = survival ? 0 : cfg.elite;
    std::vector<Chromosome> offspring;
    while (offspring.size() < n - keep) {
      const auto parents = roulette_select_indices(pop, 2, rng, cfg.selection_unit);
      const auto& a = pop[parents[0]];
      const auto& b = pop[parents[1]];
      std::pair<Chromosome, Chromosome> kids{a, b};
      if (encoding == Encoding::Binary && rng.bernoulli(cfg.crossover_rate))
        kids = crossover_single_point(a, b, cut);
      offspring.push_back(mutate(std::move(kids.first), cfg.mutation_rate, rng, real));
      if (offspring.size() < n - keep)
        offspring.push_back(mutate(std::move(kids.second), cfg.mutation_rate, rng, real));
    }
    for (auto& c : offspring) evaluate(c);

    std::vector<Chromosome> next;
    if (!survival) {
      std::vector<std::size_t> order(pop.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return pop[x].score() < pop[y].score(); });
      for (std::size_t e = 0; e < keep; ++e) next.push_back(pop[order[e]]);
      for (auto& c : offspring) next.push_back(std::move(c));
      for (auto& c : next) ++c.age;
    } else {
      std::vector<Chromosome> combined = std::move(pop);
      for (auto& c : offspring) combined.push_back(std::move(c));
      next = age_fitness_pareto_survival(std::move(combined), n - 1, rng, cfg.survival_draw_limit);
      for (auto& c : next) ++c.age;
      auto fresh = detail::random_chromosome(encoding, length, cfg, rng);
      evaluate(fresh);
      next.push_back(std::move(fresh));
    }
    pop = std::move(next);

    const auto& gen_best = pop[detail::best_index(pop)];
    if (gen_best.score() < result.best.score()) {
      result.best = gen_best;
      stagnant = 0;
    } else if (++stagnant >= cfg.stagnation_window) {
      survival = true;
    }
    record(g);
    if (result.best.score() <= cfg.target_fitness) return finish(HaltReason::Target);
  }
  return finish(HaltReason::Generations);
}

}  // namespace anlock::ga
