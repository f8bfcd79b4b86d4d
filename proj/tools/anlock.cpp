#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "anlock/circuits/calibration.hpp"
#include "anlock/harness/experiments.hpp"
#include "anlock/locking/serialize.hpp"
#include "anlock/smt/export.hpp"

using namespace anlock;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Common {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::string config;
  bool timings = false;
};

// Attack settings: built-in defaults, then the config file, then flags.
struct Overrides {
  std::optional<std::size_t> population;
  std::optional<std::size_t> max_generations;
  std::optional<double> max_wall_s;
  std::optional<double> mutation_rate;
  std::optional<double> tolerance;
};

void apply_attack_json(AttackSettings& s, const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "match_tolerance")
      s.match_tolerance = value.get<double>();
    else if (key == "case1_target")
      s.case1_target = value.get<double>();
    else if (key == "hint_tolerance")
      s.hint_tolerance = value.get<double>();
    else if (key == "scale_selection")
      s.scale_selection = value.get<bool>();
    else
      throw InvalidConfig("unknown attack setting '" + key + "'");
  }
}

void apply_config(AttackSettings& s, const json& cfg) {
  for (const auto& [key, value] : cfg.items())
    if (key != "ga" && key != "attack" && key != "seed") throw InvalidConfig("unknown config section '" + key + "'");
  if (cfg.contains("ga")) ga::apply_overrides(s.ga, cfg.at("ga"));
  if (cfg.contains("attack")) apply_attack_json(s, cfg.at("attack"));
  if (cfg.contains("seed")) s.ga.seed = cfg.at("seed").get<std::uint64_t>();
}

void apply_flags(AttackSettings& s, const Common& c, const Overrides& o) {
  if (c.seed_given) s.ga.seed = c.seed;
  if (o.population) s.ga.population = *o.population;
  if (o.max_generations) s.ga.max_generations = *o.max_generations;
  if (o.max_wall_s) s.ga.max_wall_s = *o.max_wall_s;
  if (o.mutation_rate) s.ga.mutation_rate = *o.mutation_rate;
  if (o.tolerance) s.match_tolerance = *o.tolerance;
  s.ga.validate();
}

AttackSettings resolve(AttackSettings s, const Common& c, const Overrides& o) {
  s.ga.seed = kDefaultSeed;
  if (!c.config.empty()) apply_config(s, read_json(c.config));
  apply_flags(s, c, o);
  return s;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (default 1)")->each([&c](const std::string&) { c.seed_given = true; });
  cmd->add_option("--config", c.config, "JSON config: {ga:{...}, attack:{...}, seed}")->check(CLI::ExistingFile);
  cmd->add_flag("--timings", c.timings, "keep wall-clock fields in written files");
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--population", o.population);
  cmd->add_option("--max-generations", o.max_generations);
  cmd->add_option("--max-wall", o.max_wall_s, "seconds");
  cmd->add_option("--mutation-rate", o.mutation_rate);
  cmd->add_option("--tolerance", o.tolerance, "relative L2 match tolerance");
}

struct AttackInputs {
  std::string locked;
  std::string oracle;
  std::string out = "report.json";
};

void add_attack_inputs(CLI::App* cmd, AttackInputs& in) {
  cmd->add_option("--locked", in.locked, "attacker-side locked netlist")->required()->check(CLI::ExistingFile);
  cmd->add_option("--oracle", in.oracle, "oracle measurements")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", in.out, "report path");
}

// Trace CSVs go next to the report.
int finish(ExperimentReport r, const fs::path& out, const Common& c) {
  if (!c.timings) strip_timings(r);
  write_json(out, to_json(r));
  for (const auto& [name, t] : r.traces) {
    auto csv = out;
    csv.replace_filename(out.stem().string() + "_" + name + ".csv");
    write_text(csv, ga::trace_csv(t));
  }
  std::printf("%s %s k=%zu K'=%zu generations=%zu distance=%.3e -> %s\n", r.attack.c_str(), r.status().c_str(),
              r.k, r.kprime, r.generations, r.final_distance, out.string().c_str());
  return r.verified ? kOk : kFailed;
}

CircuitModel load_model(const std::string& bench, const std::string& model_path) {
  if (!model_path.empty()) return model_from_json(read_json(model_path));
  return calibrate(parse_kind(bench));
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s;
  for (std::size_t i = 0; i < count; ++i) s.push_back(first + i);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analog lock generation and key-recovery attacks"};
  app.require_subcommand(1);
  Common common;
  Overrides ov;

  auto* calibrate_cmd = app.add_subcommand("calibrate", "write calibrated benchmark models");
  std::vector<std::string> benches;
  std::string out_dir = ".";
  calibrate_cmd->add_option("--bench", benches, "ota, bpf, pll, twg, receiver (default: all)");
  calibrate_cmd->add_option("--out-dir", out_dir);

  auto* lock_cmd = app.add_subcommand("lock", "lock a benchmark and measure its oracle");
  std::string bench, model_path, scheme = "smt";
  std::size_t k = 16;
  bool reveal = false;
  lock_cmd->add_option("--bench", bench);
  lock_cmd->add_option("--model", model_path, "model JSON instead of a built-in benchmark")->check(CLI::ExistingFile);
  lock_cmd->add_option("--scheme", scheme, "smt or pb");
  lock_cmd->add_option("--k", k, "key length");
  lock_cmd->add_option("--out-dir", out_dir);
  lock_cmd->add_flag("--reveal-key", reveal, "print the locking key");
  add_common(lock_cmd, common);

  auto* oracle_cmd = app.add_subcommand("oracle", "measure an oracle-side netlist");
  std::string chip, out = "oracle.json";
  oracle_cmd->add_option("--chip", chip, "oracle-side netlist")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--out", out);

  AttackInputs in;
  auto* ga_cmd = app.add_subcommand("attack-ga", "GA attack (case 1: widths, case 2: key)");
  int attack_case = 2;
  std::vector<double> hint;
  add_attack_inputs(ga_cmd, in);
  ga_cmd->add_option("--case", attack_case)->check(CLI::IsMember({1, 2}));
  ga_cmd->add_option("--hint", hint, "per-slot width hint (case 2)")->delimiter(',');
  add_common(ga_cmd, common);
  add_overrides(ga_cmd, ov);

  auto* two_cmd = app.add_subcommand("two-pass", "case 1 widths as the hint of a case 2 search");
  add_attack_inputs(two_cmd, in);
  add_common(two_cmd, common);
  add_overrides(two_cmd, ov);

  auto* enum_cmd = app.add_subcommand("attack-enum", "subset-sum enumeration plus brute check");
  smt::EnumerateOptions enum_opt;
  std::string candidates_path, smtlib_path;
  add_attack_inputs(enum_cmd, in);
  enum_cmd->add_option("--model", model_path, "model JSON supplying the design specification")
      ->check(CLI::ExistingFile);
  enum_cmd->add_option("--width-tolerance", enum_opt.tolerance, "relative width tolerance");
  enum_cmd->add_option("--cap", enum_opt.cap, "maximum candidate count");
  enum_cmd->add_option("--candidates", candidates_path, "candidate CSV path");
  enum_cmd->add_option("--smtlib", smtlib_path, "write the constraint as SMT-LIB2");
  add_common(enum_cmd, common);
  add_overrides(enum_cmd, ov);

  auto* census_cmd = app.add_subcommand("census", "count keys that reproduce the oracle");
  CensusOptions census_opt;
  add_attack_inputs(census_cmd, in);
  census_cmd->add_option("--samples", census_opt.samples, "sample size above the exhaustive limit");
  census_cmd->add_option("--exhaustive-bits", census_opt.max_exhaustive_bits);
  census_cmd->add_option("--keep", census_opt.keep, "matching keys listed in the output");
  census_cmd->add_option("--tolerance", census_opt.tolerance, "relative L2 match tolerance");
  add_common(census_cmd, common);

  auto* compare_cmd = app.add_subcommand("compare", "GA against enumeration over key lengths and seeds");
  std::vector<std::size_t> ks{16};
  std::size_t seeds = 5;
  compare_cmd->add_option("--bench", bench)->required();
  compare_cmd->add_option("--model", model_path)->check(CLI::ExistingFile);
  compare_cmd->add_option("--scheme", scheme);
  compare_cmd->add_option("--k", ks)->delimiter(',');
  compare_cmd->add_option("--seeds", seeds, "seed count starting at --seed");
  compare_cmd->add_option("--cap", enum_opt.cap);
  compare_cmd->add_option("--out-dir", out_dir);
  add_common(compare_cmd, common);
  add_overrides(compare_cmd, ov);

  auto* rx_cmd = app.add_subcommand("receiver", "lock the receiver and recover its PLL key block");
  rx_cmd->add_option("--out-dir", out_dir);
  add_common(rx_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*calibrate_cmd) {
      if (benches.empty())
        for (auto kind : all_kinds()) benches.emplace_back(to_string(kind));
      for (const auto& b : benches) {
        const auto path = fs::path(out_dir) / (b + ".json");
        write_json(path, to_json(calibrate(parse_kind(b))));
        std::printf("%s\n", path.string().c_str());
      }
      return kOk;
    }

    if (*lock_cmd) {
      if (bench.empty() == model_path.empty()) throw CLI::ValidationError("give exactly one of --bench, --model");
      const auto base = load_model(bench, model_path);
      const auto sch = parse_scheme(scheme);
      const auto net = base.kind() == CircuitKind::Receiver && sch == LockScheme::SmtLock && k == 512
                           ? make_receiver_lock(base, common.seed)
                           : make_lock(sch, base, k, common.seed);
      const Oracle o(net);
      const fs::path dir(out_dir);
      write_json(dir / "locked.json", to_json(net.view()));
      write_json(dir / "chip.json", to_json(net));
      write_json(dir / "oracle.json", to_json(o.measure()));
      std::printf("locked %s %s k=%zu seed=%llu -> %s\n", std::string(to_string(base.kind())).c_str(),
                  std::string(to_string(sch)).c_str(), k, static_cast<unsigned long long>(common.seed),
                  dir.string().c_str());
      if (reveal) std::printf("key %s\n", net.locking_key.to_hex().c_str());
      return kOk;
    }

    if (*oracle_cmd) {
      write_json(out, to_json(Oracle(netlist_from_json(read_json(chip))).measure()));
      std::printf("%s\n", out.c_str());
      return kOk;
    }

    if (*rx_cmd) {
      const auto net = make_receiver_lock(calibrate_receiver(), common.seed);
      const Oracle o(net);
      const fs::path dir(out_dir);
      const auto bundle = o.measure();
      write_json(dir / "locked.json", to_json(net.view()));
      write_json(dir / "oracle.json", to_json(bundle));
      ReceiverSettings rs;
      if (!common.config.empty()) {
        const auto cfg = read_json(common.config);
        apply_config(rs.first, cfg.value("first", json::object()));
        apply_config(rs.second, cfg.value("second", json::object()));
      }
      rs.set_seed(common.seed);
      return finish(run_receiver_attack(o.view(), bundle, rs), dir / "report.json", common);
    }

    const auto settings = resolve(AttackSettings{}, common, ov);

    if (*compare_cmd) {
      auto rows = compare_attacks(load_model(bench, model_path), parse_scheme(scheme), ks,
                                  seed_range(settings.ga.seed, seeds), settings, enum_opt);
      if (!common.timings)
        for (auto& r : rows) r.t_s = 0.0;
      const fs::path dir(out_dir);
      write_text(dir / "compare.csv", compare_csv(rows));
      write_text(dir / "compare_runs.csv", compare_runs_csv(rows));
      std::printf("%s\n", (dir / "compare.csv").string().c_str());
      return kOk;
    }

    const auto view = view_from_json(read_json(in.locked));
    const auto bundle = bundle_from_json(read_json(in.oracle));
    if (bundle.kind != view.design.kind) throw InvalidParams("oracle and netlist describe different circuits");

    if (*ga_cmd) {
      if (attack_case == 1) return finish(case1_report(view, bundle, settings), in.out, common);
      std::optional<ParamVector> h;
      if (!hint.empty()) h = hint;
      return finish(case2_report(view, bundle, settings, h), in.out, common);
    }

    if (*two_cmd) return finish(two_pass(view, bundle, settings), in.out, common);

    if (*census_cmd) {
      census_opt.seed = settings.ga.seed;
      const auto r = key_census(view, bundle.ordered(), census_opt);
      json keys = json::array();
      for (const auto& key : r.matches) keys.push_back(key.to_hex());
      write_json(in.out, {{"k", view.k},
                          {"tolerance", census_opt.tolerance},
                          {"exhaustive", r.exhaustive},
                          {"examined", r.examined},
                          {"matching", r.matching},
                          {"degenerate", r.degenerate},
                          {"estimated_total", r.estimated_total(view.k)},
                          {"keys", keys}});
      std::printf("census k=%zu examined=%llu matching=%llu estimated=%.6g -> %s\n", view.k,
                  static_cast<unsigned long long>(r.examined), static_cast<unsigned long long>(r.matching),
                  r.estimated_total(view.k), in.out.c_str());
      return kOk;
    }

    if (*enum_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      std::optional<CircuitSpec> spec = view.design.spec;
      if (!model_path.empty()) spec = model_from_json(read_json(model_path)).spec();
      const auto constraint = smt::make_constraint(view, smt::derive_targets(view, spec, bundle.metrics));
      if (!smtlib_path.empty()) write_text(smtlib_path, smt::to_smtlib(constraint, enum_opt.tolerance));
      const auto set = smt::enumerate_keys(constraint, enum_opt);
      auto r = detail::report_header(view, "smt", settings.ga.seed);
      r.kprime = set.size();
      if (set.empty()) {
        if (!candidates_path.empty()) write_text(candidates_path, smt::candidates_csv(set));
      } else {
        const auto checked = smt::brute_check(set, view, bundle.ordered(), settings.match_tolerance);
        if (!candidates_path.empty()) write_text(candidates_path, smt::candidates_csv(checked));
        for (const auto& s : checked.survivors) r.keys.push_back(s.key.to_hex());
        for (const auto& c : checked.checked) r.final_distance = std::min(r.final_distance, c.curve_distance);
        r.verified = !checked.no_match();
        r.extra["survivors"] = checked.survivors.size();
        r.extra["simulations"] = checked.simulations;
      }
      r.wall_s = detail::seconds_since(t0);
      return finish(r, in.out, common);
    }
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const CandidateOverflow& e) {
    std::fprintf(stderr, "FAILED: %s\n", e.what());
    return kFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
