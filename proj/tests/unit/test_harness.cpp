#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "anlock/circuits/calibration.hpp"
#include "anlock/harness/experiments.hpp"

using namespace anlock;

namespace {

struct Instance {
  LockedNetlist net;
  OracleBundle oracle;
  LockedView view;
};

Instance make(CircuitKind kind, LockScheme scheme, std::size_t k, std::uint64_t seed) {
  auto net = make_lock(scheme, calibrate(kind), k, seed);
  const Oracle o(net);
  return {net, o.measure(), o.view()};
}

AttackSettings seeded(std::uint64_t seed) {
  AttackSettings s;
  s.ga.seed = seed;
  return s;
}

}  // namespace

TEST(Case1, OtaRecoversWidth) {
  const auto in = make(CircuitKind::OTA, LockScheme::SmtLock, 16, 1);
  const auto r = run_case1(in.view, in.oracle, seeded(1));
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.widths[0] / in.net.base.nominal_params[0], 1.0, 1e-3);
  EXPECT_LE(r.relative_distance, 1e-6);
}

TEST(Case1, SeededAtNominalStopsAtGenerationZero) {
  const auto in = make(CircuitKind::TWG, LockScheme::SmtLock, 16, 2);
  const auto r = run_case1(in.view, in.oracle, seeded(1), {ga::Chromosome::real(in.net.base.nominal_params)});
  EXPECT_EQ(r.ga.generations(), 0u);
  EXPECT_EQ(r.relative_distance, 0.0);
}

TEST(Case1, BoundsSpanOneColumnToAllColumns) {
  const auto in = make(CircuitKind::BPF, LockScheme::SmtLock, 33, 1);
  std::vector<double> lo, hi;
  width_bounds(in.view, lo, hi);
  ASSERT_EQ(lo.size(), 6u);
  for (std::size_t s = 0; s < 6; ++s) {
    EXPECT_LE(lo[s], in.net.base.nominal_params[s]);
    EXPECT_GE(hi[s], in.net.base.nominal_params[s]);
  }
}

TEST(Case2, SmtLockReturnsLockingKey) {
  const auto in = make(CircuitKind::OTA, LockScheme::SmtLock, 16, 1);
  const auto r = run_case2_ga(in.view, in.oracle, seeded(3));
  EXPECT_TRUE(r.matches);
  EXPECT_EQ(r.key, in.net.locking_key);
}

TEST(Case2, PbLockKeyIsInCensus) {
  const auto in = make(CircuitKind::PLL, LockScheme::PbLock, 16, 1);
  const auto r = run_case2_ga(in.view, in.oracle, seeded(1));
  ASSERT_TRUE(r.matches);
  CensusOptions opt;
  opt.keep = 1u << 16;
  const auto census = key_census(in.view, in.oracle.ordered(), opt);
  EXPECT_NE(std::find(census.matches.begin(), census.matches.end(), r.key), census.matches.end());
}

TEST(Case2, HintCriterionIsZeroInsideDeadBand) {
  EXPECT_EQ(hint_residual(1.0005, 1.0, 1e-3), 0.0);
  EXPECT_NEAR(hint_residual(1.003, 1.0, 1e-3), 2.0, 1e-9);
}

TEST(Case2, TwoCriteriaSumOfSingleCriteria) {
  const auto in = make(CircuitKind::PLL, LockScheme::SmtLock, 16, 1);
  Rng rng(5);
  const auto key = Key::random(16, rng);
  auto curve = [&](const std::string& name) {
    return curve_criterion(name, in.oracle.curves.at(name), in.oracle.grids.at(name),
                           [&](const ga::Chromosome&, const SamplingGrid& g) { return locked_simulate(in.view, key, g); });
  };
  const auto c = ga::Chromosome::binary(key);
  const ga::FitnessFunction both{{curve("transient"), curve("spectrum")}};
  const ga::FitnessFunction t{{curve("transient")}}, s{{curve("spectrum")}};
  EXPECT_EQ(ga::evaluate_fitness(both, c), ga::evaluate_fitness(t, c) + ga::evaluate_fitness(s, c));
}

TEST(TwoPass, DeterministicAndFeedsWidths) {
  const auto in = make(CircuitKind::OTA, LockScheme::SmtLock, 16, 4);
  auto a = two_pass(in.view, in.oracle, seeded(2));
  auto b = two_pass(in.view, in.oracle, seeded(2));
  EXPECT_TRUE(a.verified);
  EXPECT_EQ(a.keys[0], in.net.locking_key.to_hex());
  EXPECT_EQ(a.traces.size(), 2u);
  EXPECT_EQ(a.params, run_case1(in.view, in.oracle, seeded(2)).widths);
  strip_timings(a);
  strip_timings(b);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Report, WritesJsonAndTraces) {
  const auto in = make(CircuitKind::OTA, LockScheme::SmtLock, 16, 1);
  auto r = case2_report(in.view, in.oracle, seeded(1));
  strip_timings(r);
  const auto dir = result_dir(std::filesystem::temp_directory_path() / "anlock_test_results", r.benchmark,
                              r.scheme, r.k, r.seed);
  write_report(dir, r);
  const auto j = read_json(dir / "report.json");
  EXPECT_EQ(j.at("status"), "OK");
  EXPECT_EQ(j.at("Kprime"), 1);
  EXPECT_EQ(j.at("wall_s"), 0.0);
  std::ifstream csv(dir / "trace_case2.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "generation,best,mean,std,elapsed_s");
  EXPECT_NE(dir.string().find("ota/smt-lock/k16/seed1"), std::string::npos);
}

TEST(Receiver, OracleExposesOnlyOutputCurve) {
  const auto net = make_receiver_lock(calibrate_receiver(), 1);
  const Oracle o(net);
  const auto b = o.measure();
  ASSERT_EQ(b.curves.size(), 1u);
  EXPECT_TRUE(b.curves.contains("frequency"));
  EXPECT_FALSE(b.curves.contains("transient"));
  EXPECT_FALSE(b.curves.contains("spectrum"));
  const auto j = to_json(b).dump();
  EXPECT_EQ(j.find("transient"), std::string::npos);
  EXPECT_EQ(j.find("spectrum"), std::string::npos);
  auto leaky = b;
  leaky.curves["transient"] = b.curves.at("frequency");
  EXPECT_THROW(run_receiver_attack(o.view(), leaky, {}), InvalidParams);
}

TEST(Receiver, WrongPllBlockMissesOracle) {
  const auto net = make_receiver_lock(calibrate_receiver(), 1);
  const Oracle o(net);
  const auto view = o.view();
  const auto oracle = o.measure().ordered();
  EXPECT_EQ(relative_distance(oracle, locked_observables(view, net.locking_key)), 0.0);
  for (int bit : view.grids[0].key_bits()) {
    auto key = net.locking_key;
    key.flip(bit);
    double d = INFINITY;
    if (!key_is_degenerate(view, key)) d = relative_distance(oracle, locked_observables(view, key));
    EXPECT_GT(d, ReceiverSettings{}.second.match_tolerance) << bit;
  }
}

TEST(Receiver, RecoversPllBlock) {
  const auto net = make_receiver_lock(calibrate_receiver(), 2);
  const Oracle o(net);
  ReceiverSettings rs;
  rs.set_seed(2);
  const auto r = run_receiver_attack(o.view(), o.measure(), rs);
  EXPECT_TRUE(r.verified);
  EXPECT_EQ(r.keys[0], net.locking_key.slice(0, 40).to_hex());
}

TEST(Compare, CsvSchema) {
  const auto rows = compare_attacks(calibrate_ota(), LockScheme::SmtLock, {16}, {1}, seeded(1));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].success);
  EXPECT_TRUE(rows[1].success);
  EXPECT_GE(*rows[1].kprime, 1u);
  const auto csv = compare_csv(rows);
  EXPECT_EQ(csv.rfind("bench,scheme,k,attack,Kprime,t_s\nota,smt-lock,16,ga,1,", 0), 0u);
  EXPECT_NE(csv.find("\nota,smt-lock,16,smt,"), std::string::npos);
  EXPECT_EQ(compare_runs_csv(rows).rfind("bench,scheme,k,seed,attack,generations,t_s,success\n", 0), 0u);
}

TEST(Compare, EnumeratorOverflowIsReported) {
  smt::EnumerateOptions tiny;
  tiny.cap = 2;
  const auto rows = compare_attacks(calibrate_pll(), LockScheme::PbLock, {16}, {1}, seeded(1), tiny);
  EXPECT_FALSE(rows[1].kprime.has_value());
  EXPECT_NE(compare_csv(rows).find(",smt,overflow,"), std::string::npos);
}
