#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "anlock/ga/chromosome.hpp"

namespace anlock::ga {

using Residuals = std::vector<double>;

/// One fitness criterion: residuals E_i - O_i of a chromosome against fixed
/// oracle data.
struct Criterion {
  std::string name;
  std::function<Residuals(const Chromosome&)> residuals;
};

struct FitnessFunction {
  std::vector<Criterion> criteria;
};

inline constexpr double kFailedFitness = std::numeric_limits<double>::infinity();

inline double sum_of_squares(const Residuals& r) {
  double acc = 0.0;
  for (double x : r) acc += x * x;
  return acc;
}

/// Per-criterion sums of squares. A criterion whose evaluation fails scores +inf.
inline std::vector<double> evaluate_criteria(const FitnessFunction& ff, const Chromosome& c) {
  std::vector<double> out;
  out.reserve(ff.criteria.size());
  for (const auto& cr : ff.criteria) {
    try {
      const double v = sum_of_squares(cr.residuals(c));
      out.push_back(std::isnan(v) ? kFailedFitness : v);
    } catch (const Error&) {
      out.push_back(kFailedFitness);
    }
  }
  return out;
}

/// F = sum_j sum_i (E_ij - O_ij)^2.
inline double evaluate_fitness(const FitnessFunction& ff, const Chromosome& c) {
  if (ff.criteria.empty()) throw InvalidConfig("fitness function has no criteria");
  double total = 0.0;
  for (double v : evaluate_criteria(ff, c)) total += v;
  return total;
}

}  // namespace anlock::ga
