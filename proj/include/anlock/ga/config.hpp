#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "anlock/core/error.hpp"

namespace anlock::ga {

struct GAConfig {
  std::size_t population = 40;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  std::size_t stagnation_window = 8;
  std::size_t max_generations = 2000;
  double max_wall_s = 0.0;  // 0 = unlimited
  double target_fitness = 0.0;
  std::uint64_t seed = 1;
  std::size_t elite = 1;
  double selection_unit = 1.0;  // roulette score 1 / (1 + F / selection_unit)

  // Real encoding
  std::vector<double> lower;
  std::vector<double> upper;
  double real_step = 0.05;            // multiplicative factor in [1 - step, 1 + step]
  double real_step_decades = 0.0;     // > 0: |factor - 1| = step * 10^(-decades * U)
  double real_rate_multiplier = 5.0;  // per-gene probability = multiplier * mutation_rate
  bool log_uniform_init = false;

  // Binary encoding: cut at floor(L/2), or at the nearest block boundary when set.
  std::vector<std::size_t> crossover_blocks;

  std::size_t survival_draw_limit = 0;  // 0 = 4 * population
  bool cache_fitness = true;             // binary genes only

  void validate() const {
    if (population < 2) throw InvalidConfig("population must be at least 2");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
      throw InvalidConfig("crossover rate must lie in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
      throw InvalidConfig("mutation rate must lie in [0, 1]");
    if (!(target_fitness >= 0.0)) throw InvalidConfig("target fitness must be non-negative");
    if (!(selection_unit > 0.0)) throw InvalidConfig("selection unit must be positive");
    if (elite >= population) throw InvalidConfig("elite count must be below the population");
    if (!(real_step >= 0.0 && real_step < 1.0)) throw InvalidConfig("real step must lie in [0, 1)");
    if (!(real_step_decades >= 0.0)) throw InvalidConfig("real step decades must be non-negative");
    if (lower.size() != upper.size()) throw InvalidConfig("bounds must have equal length");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] > 0.0 && lower[i] <= upper[i]))
        throw InvalidConfig("real bounds must satisfy 0 < lower <= upper");
  }
};

inline void to_json(nlohmann::json& j, const GAConfig& c) {
  j = {{"population", c.population},
       {"crossover_rate", c.crossover_rate},
       {"mutation_rate", c.mutation_rate},
       {"stagnation_window", c.stagnation_window},
       {"max_generations", c.max_generations},
       {"max_wall_s", c.max_wall_s},
       {"target_fitness", c.target_fitness},
       {"seed", c.seed},
       {"elite", c.elite},
       {"selection_unit", c.selection_unit},
       {"lower", c.lower},
       {"upper", c.upper},
       {"real_step", c.real_step},
       {"real_step_decades", c.real_step_decades},
       {"real_rate_multiplier", c.real_rate_multiplier},
       {"log_uniform_init", c.log_uniform_init},
       {"crossover_blocks", c.crossover_blocks},
       {"survival_draw_limit", c.survival_draw_limit},
       {"cache_fitness", c.cache_fitness}};
}

/// Fields present in `j` override the ones already in `c`; unknown keys are rejected.
inline void apply_overrides(GAConfig& c, const nlohmann::json& j) {
  nlohmann::json merged = c;
  for (const auto& [key, value] : j.items()) {
    if (!merged.contains(key)) throw InvalidConfig("unknown GA setting '" + key + "'");
    merged[key] = value;
  }
  try {
    c.population = merged["population"].get<std::size_t>();
    c.crossover_rate = merged["crossover_rate"].get<double>();
    c.mutation_rate = merged["mutation_rate"].get<double>();
    c.stagnation_window = merged["stagnation_window"].get<std::size_t>();
    c.max_generations = merged["max_generations"].get<std::size_t>();
    c.max_wall_s = merged["max_wall_s"].get<double>();
    c.target_fitness = merged["target_fitness"].get<double>();
    c.seed = merged["seed"].get<std::uint64_t>();
    c.elite = merged["elite"].get<std::size_t>();
    c.selection_unit = merged["selection_unit"].get<double>();
    c.lower = merged["lower"].get<std::vector<double>>();
    c.upper = merged["upper"].get<std::vector<double>>();
    c.real_step = merged["real_step"].get<double>();
    c.real_step_decades = merged["real_step_decades"].get<double>();
    c.real_rate_multiplier = merged["real_rate_multiplier"].get<double>();
    c.log_uniform_init = merged["log_uniform_init"].get<bool>();
    c.crossover_blocks = merged["crossover_blocks"].get<std::vector<std::size_t>>();
    c.survival_draw_limit = merged["survival_draw_limit"].get<std::size_t>();
    c.cache_fitness = merged["cache_fitness"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bad GA setting: ") + e.what());
  }
  c.validate();
}

}  // namespace anlock::ga
