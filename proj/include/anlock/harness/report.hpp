#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "anlock/harness/attacks.hpp"

namespace anlock {

struct ExperimentReport {
  std::string benchmark;
  std::string scheme;
  std::size_t k = 0;
  std::string attack;
  std::uint64_t seed = 0;
  std::size_t kprime = 0;
  std::vector<std::string> keys;  // hex
  ParamVector params;
  std::size_t generations = 0;
  double wall_s = 0.0;
  double final_distance = INFINITY;  // relative L2 to the oracle
  bool verified = false;
  std::map<std::string, std::vector<ga::GenerationStats>> traces;
  nlohmann::json extra = nlohmann::json::object();

  std::string status() const { return verified ? "OK" : "FAILED"; }
};

inline nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json traces = nlohmann::json::object();
  for (const auto& [name, t] : r.traces) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : t) rows.push_back({s.generation, s.best, s.mean, s.std, s.elapsed_s});
    traces[name] = {{"columns", {"generation", "best", "mean", "std", "elapsed_s"}}, {"rows", rows}};
  }
  auto finite = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"benchmark", r.benchmark},
          {"scheme", r.scheme},
          {"k", r.k},
          {"attack", r.attack},
          {"seed", r.seed},
          {"Kprime", r.kprime},
          {"keys", r.keys},
          {"params", r.params},
          {"generations", r.generations},
          {"wall_s", r.wall_s},
          {"final_distance", finite(r.final_distance)},
          {"status", r.status()},
          {"extra", r.extra},
          {"traces", traces}};
}

/// Zeroes every wall-clock field so reruns produce identical files.
inline void strip_timings(ExperimentReport& r) {
  r.wall_s = 0.0;
  for (auto& [name, t] : r.traces)
    for (auto& s : t) s.elapsed_s = 0.0;
}

/// results/<bench>/<scheme>/k<k>/seed<seed>
inline std::filesystem::path result_dir(const std::filesystem::path& root, const std::string& bench,
                                        const std::string& scheme, std::size_t k,
                                        std::uint64_t seed) {
  return root / bench / scheme / ("k" + std::to_string(k)) / ("seed" + std::to_string(seed));
}

/// Writes report.json plus one CSV per trace into `dir`.
inline void write_report(const std::filesystem::path& dir, const ExperimentReport& r) {
  write_json(dir / "report.json", to_json(r));
  for (const auto& [name, t] : r.traces) write_text(dir / ("trace_" + name + ".csv"), ga::trace_csv(t));
}

}  // namespace anlock
