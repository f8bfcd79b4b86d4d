#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "anlock/harness/report.hpp"
#include "anlock/locking/generate.hpp"
#include "anlock/smt/check.hpp"

namespace anlock {

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline ExperimentReport report_header(const LockedView& view, const std::string& attack,
                                      std::uint64_t seed) {
  ExperimentReport r;
  r.benchmark = std::string(to_string(view.design.kind));
  r.scheme = std::string(to_string(view.scheme));
  r.k = view.k;
  r.attack = attack;
  r.seed = seed;
  return r;
}

}  // namespace detail

inline ExperimentReport case1_report(const LockedView& view, const OracleBundle& oracle,
                                     const AttackSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c1 = run_case1(view, oracle, settings);
  auto r = detail::report_header(view, "case1", settings.ga.seed);
  r.params = c1.widths;
  r.generations = c1.ga.generations();
  r.final_distance = c1.relative_distance;
  r.verified = c1.relative_distance * c1.relative_distance <= settings.case1_target * (1.0 + 1e-9);
  r.traces["case1"] = c1.ga.trace;
  r.wall_s = detail::seconds_since(t0);
  return r;
}

/// Binary key search; `hint` adds the width criterion.
inline ExperimentReport case2_report(const LockedView& view, const OracleBundle& oracle,
                                     const AttackSettings& settings,
                                     const std::optional<ParamVector>& hint = std::nullopt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c2 = run_case2_ga(view, oracle, settings, hint);
  auto r = detail::report_header(view, hint ? "ga-hint" : "ga", settings.ga.seed);
  r.kprime = 1;
  r.keys = {c2.key.to_hex()};
  r.generations = c2.ga.generations();
  r.final_distance = c2.relative_distance;
  r.verified = c2.matches;
  r.traces["case2"] = c2.ga.trace;
  r.wall_s = detail::seconds_since(t0);
  return r;
}

/// Case 1 widths become the width hint of the binary pass.
inline ExperimentReport two_pass(const LockedView& view, const OracleBundle& oracle,
                                 const AttackSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c1 = run_case1(view, oracle, settings);
  const auto c2 = run_case2_ga(view, oracle, settings, c1.widths);
  auto r = detail::report_header(view, "two-pass", settings.ga.seed);
  r.kprime = 1;
  r.keys = {c2.key.to_hex()};
  r.params = c1.widths;
  r.generations = c2.ga.generations();
  r.final_distance = c2.relative_distance;
  r.verified = c2.matches;
  r.traces["case1"] = c1.ga.trace;
  r.traces["case2"] = c2.ga.trace;
  r.extra["case1_generations"] = c1.ga.generations();
  r.extra["case1_distance"] = c1.relative_distance;
  r.wall_s = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------- receiver

/// Key split of the 512-bit receiver lock, PLL block first.
inline const std::vector<std::size_t>& receiver_slot_bits() {
  static const std::vector<std::size_t> bits{40, 157, 157, 158};
  return bits;
}

inline LockedNetlist make_receiver_lock(const CircuitModel& receiver, std::uint64_t seed) {
  LockOptions opt;
  opt.slot_bits = receiver_slot_bits();
  return make_smt_lock(receiver, 512, seed, opt);
}

struct ReceiverSettings {
  AttackSettings first = [] {
    AttackSettings s;
    s.case1_target = 1e-26;
    s.ga.real_step_decades = 14.0;
    s.ga.max_generations = 20000;
    return s;
  }();
  AttackSettings second = [] {
    AttackSettings s;
    s.match_tolerance = 1e-11;
    s.ga.population = 100;
    s.ga.mutation_rate = 0.1;
    s.ga.max_generations = 2000;
    return s;
  }();
  std::size_t pll_slot = 0;

  void set_seed(std::uint64_t seed) {
    first.ga.seed = seed;
    second.ga.seed = seed;
  }
};

/// Two passes on the receiver output alone: real widths for all four slots,
/// then a binary search over the PLL key block with the other slots held at
/// their recovered widths.
inline ExperimentReport run_receiver_attack(const LockedView& view, const OracleBundle& oracle,
                                            const ReceiverSettings& rs) {
  if (view.design.kind != CircuitKind::Receiver) throw InvalidParams("receiver attack needs a receiver view");
  if (oracle.curves.size() != 1 || !oracle.curves.contains("frequency"))
    throw InvalidParams("receiver oracle must expose only the output curve");
  const auto t0 = std::chrono::steady_clock::now();
  const auto c1 = run_case1(view, oracle, rs.first);
  const auto& grid = view.grids.at(rs.pll_slot);
  KeySpace ks{grid.key_bits(), Key(view.k), c1.widths};
  ks.slot_widths[rs.pll_slot] = NAN;
  ParamVector hint(view.grids.size(), NAN);
  hint[rs.pll_slot] = c1.widths[rs.pll_slot];
  const auto c2 = run_case2_ga(view, oracle, rs.second, hint, ks);

  auto r = detail::report_header(view, "receiver", rs.second.ga.seed);
  Key block(ks.free_bits.size());
  for (std::size_t i = 0; i < ks.free_bits.size(); ++i) block.set(i, c2.key[ks.free_bits[i]]);
  r.kprime = 1;
  r.keys = {block.to_hex()};
  r.params = c1.widths;
  r.params[rs.pll_slot] = effective_width(grid, c2.key);
  r.generations = c2.ga.generations();
  r.final_distance = c2.relative_distance;
  r.verified = c2.matches;
  r.traces["case1"] = c1.ga.trace;
  r.traces["case2"] = c2.ga.trace;
  r.extra["block_bits"] = ks.free_bits;
  r.extra["case1_generations"] = c1.ga.generations();
  r.extra["case1_distance"] = c1.relative_distance;
  r.wall_s = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------- compare

struct CompareRow {
  std::string bench;
  std::string scheme;
  std::size_t k = 0;
  std::string attack;  // "ga" or "smt"
  std::uint64_t seed = 0;
  std::optional<std::size_t> kprime;  // empty: enumeration overflowed
  double t_s = 0.0;
  std::size_t generations = 0;
  bool success = false;  // GA key matches / locking key among SMT survivors
};

/// Per (k, seed): GA key search against enumeration plus brute check.
inline std::vector<CompareRow> compare_attacks(const CircuitModel& base, LockScheme scheme,
                                               const std::vector<std::size_t>& ks,
                                               const std::vector<std::uint64_t>& seeds,
                                               const AttackSettings& settings,
                                               const smt::EnumerateOptions& enum_opt = {}) {
  std::vector<CompareRow> rows;
  for (auto k : ks)
    for (auto seed : seeds) {
      const auto net = make_lock(scheme, base, k, seed);
      const Oracle oracle(net);
      const auto bundle = oracle.measure();
      const auto view = oracle.view();
      CompareRow row{std::string(to_string(base.kind())), std::string(to_string(scheme)), k, "ga", seed, std::nullopt};

      auto s = settings;
      s.ga.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      const auto ga = run_case2_ga(view, bundle, s);
      row.t_s = detail::seconds_since(t0);
      row.kprime = 1;
      row.generations = ga.ga.generations();
      row.success = ga.matches;
      rows.push_back(row);

      row.attack = "smt";
      row.generations = 0;
      const auto t1 = std::chrono::steady_clock::now();
      try {
        const auto targets = smt::derive_targets(view, base.spec(), bundle.metrics);
        const auto set = smt::enumerate_keys(smt::make_constraint(view, targets), enum_opt);
        row.kprime = set.size();
        row.success = false;
        if (!set.empty()) {
          const auto checked = smt::brute_check(set, view, bundle.ordered(), s.match_tolerance);
          for (const auto& c : checked.survivors) row.success = row.success || c.key == net.locking_key;
        }
      } catch (const CandidateOverflow&) {
        row.kprime.reset();
        row.success = false;
      }
      row.t_s = detail::seconds_since(t1);
      rows.push_back(row);
    }
  return rows;
}

/// bench,scheme,k,attack,Kprime,t_s with one row per (k, attack): median time,
/// median K' ("overflow" when any seed overflowed).
inline std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out = "bench,scheme,k,attack,Kprime,t_s\n";
  std::vector<std::pair<std::size_t, std::string>> groups;
  for (const auto& r : rows)
    if (std::find(groups.begin(), groups.end(), std::pair{r.k, r.attack}) == groups.end())
      groups.emplace_back(r.k, r.attack);
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  for (const auto& [k, attack] : groups) {
    std::vector<double> t, kp;
    bool overflow = false;
    const CompareRow* first = nullptr;
    for (const auto& r : rows) {
      if (r.k != k || r.attack != attack) continue;
      if (!first) first = &r;
      t.push_back(r.t_s);
      if (r.kprime)
        kp.push_back(static_cast<double>(*r.kprime));
      else
        overflow = true;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", median(t));
    const std::string kprime = overflow ? "overflow" : std::to_string(static_cast<long long>(median(kp)));
    out += first->bench + "," + first->scheme + "," + std::to_string(k) + "," + attack + "," + kprime +
           "," + buf + "\n";
  }
  return out;
}

/// Per-run detail: bench,scheme,k,seed,attack,generations,t_s,success
inline std::string compare_runs_csv(const std::vector<CompareRow>& rows) {
  std::string out = "bench,scheme,k,seed,attack,generations,t_s,success\n";
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.t_s);
    out += r.bench + "," + r.scheme + "," + std::to_string(r.k) + "," + std::to_string(r.seed) + "," +
           r.attack + "," + std::to_string(r.generations) + "," + buf + "," + (r.success ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace anlock
