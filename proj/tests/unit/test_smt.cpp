#include <gtest/gtest.h>

#include <set>

#include "anlock/circuits/calibration.hpp"
#include "anlock/harness/oracle.hpp"
#include "anlock/locking/generate.hpp"
#include "anlock/smt/export.hpp"

using namespace anlock;
using namespace anlock::smt;

namespace {

void expect_rel_near(double actual, double expected, double rel) {
  EXPECT_NEAR(actual, expected, rel * std::abs(expected));
}

// Every key whose per-slot width matches, by exhaustion over 2^k.
std::set<Key> brute_force_matches(const LockedView& view, const std::vector<double>& targets, double tol) {
  std::set<Key> out;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << view.k); ++i) {
    const auto key = Key::from_integer(i, view.k);
    bool ok = true;
    for (std::size_t s = 0; s < view.grids.size() && ok; ++s)
      ok = width_matches(effective_width(view.grids[s], key), targets[s], tol);
    if (ok) out.insert(key);
  }
  return out;
}

std::vector<double> targets_for(const LockedNetlist& net) {
  return derive_targets(net.view(), net.base.spec(), Oracle(net).measure().metrics);
}

}  // namespace

TEST(DeriveTargets, OtaFromGain) {
  const auto m = calibrate_ota();
  const Metrics metrics{{"gain_db", 41.0}, {"ugf_hz", 1.2e9}};
  ModelDesign d = m.design;
  const LockedView view{d, LockScheme::SmtLock, 1, {}};
  expect_rel_near(derive_targets(view, m.spec(), metrics)[0], m.nominal_params[0], 1e-3);
}

TEST(DeriveTargets, PllFromLockingFrequency) {
  const auto m = calibrate_pll();
  const LockedView view{m.design, LockScheme::SmtLock, 1, {}};
  expect_rel_near(derive_targets(view, m.spec(), {{"f_locking_hz", 1.8e9}})[0], m.nominal_params[0], 1e-3);
}

TEST(DeriveTargets, EveryBenchmarkRecoversNominal) {
  for (auto kind : all_kinds()) {
    const auto m = calibrate(kind);
    const LockedView view{m.design.without_design_targets(), LockScheme::SmtLock, 1, {}};
    const auto t = derive_targets(view, m.spec(), characterize(m.design, m.nominal_params));
    ASSERT_EQ(t.size(), m.nominal_params.size());
    for (std::size_t i = 0; i < t.size(); ++i) expect_rel_near(t[i], m.nominal_params[i], 1e-3);
  }
}

TEST(DeriveTargets, NeedsSpecification) {
  const auto m = calibrate_ota();
  const LockedView view{m.design, LockScheme::SmtLock, 1, {}};
  const auto metrics = characterize(m.design, m.nominal_params);
  EXPECT_THROW(derive_targets(view, std::nullopt, metrics), SpecMissing);
  auto no_iref = m.spec();
  no_iref.i_ref = 0.0;
  EXPECT_THROW(derive_targets(view, no_iref, metrics), SpecMissing);
  auto no_lambda = m.spec();
  no_lambda.constants.erase("lambda");
  EXPECT_THROW(derive_targets(view, no_lambda, metrics), SpecMissing);
  const auto bpf = calibrate_bpf();
  const LockedView bview{bpf.design, LockScheme::SmtLock, 6, {}};
  EXPECT_THROW(derive_targets(bview, bpf.design.without_design_targets().spec,
                              characterize(bpf.design, bpf.nominal_params)),
               SpecMissing);
}

TEST(Enumerate, MatchesBruteForceAndContainsLockingKey) {
  struct Case {
    CircuitKind kind;
    LockScheme scheme;
    std::size_t k;
  };
  for (const auto& c : {Case{CircuitKind::OTA, LockScheme::SmtLock, 16}, Case{CircuitKind::TWG, LockScheme::SmtLock, 14},
                        Case{CircuitKind::BPF, LockScheme::SmtLock, 12}, Case{CircuitKind::PLL, LockScheme::PbLock, 16},
                        Case{CircuitKind::TWG, LockScheme::PbLock, 16}, Case{CircuitKind::BPF, LockScheme::PbLock, 12}}) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto net = make_lock(c.scheme, calibrate(c.kind), c.k, seed);
      const auto targets = targets_for(net);
      const auto set = enumerate_keys(make_constraint(net.view(), targets));
      const auto keys = set.keys();
      const std::set<Key> got(keys.begin(), keys.end());
      EXPECT_EQ(got.size(), keys.size());
      EXPECT_EQ(got, brute_force_matches(net.view(), targets, 0.005)) << to_string(c.kind);
      EXPECT_TRUE(set.contains(net.locking_key));
      for (std::size_t i = 1; i < set.size(); ++i)
        EXPECT_LE(set.candidates[i - 1].total_residual, set.candidates[i].total_residual);
    }
  }
}

TEST(Enumerate, SmtLadderExactTargetGivesOneKey) {
  const auto net = make_smt_lock(calibrate(CircuitKind::OTA), 16, 3);
  EnumerateOptions exact;
  exact.tolerance = 0.0;
  const auto set = enumerate_keys(make_constraint(net.view(), net.base.nominal_params), exact);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.candidates[0].key, net.locking_key);
  const auto loose = enumerate_keys(make_constraint(net.view(), targets_for(net)));
  EXPECT_GT(loose.size(), 1u);
  EXPECT_EQ(loose.candidates[0].key, net.locking_key);
}

TEST(Enumerate, ZeroTargetBreaksEveryColumn) {
  const auto net = make_pb_lock(calibrate(CircuitKind::OTA), 6, 1);
  const auto set = enumerate_keys(make_constraint(net.view(), {0.0}));
  EXPECT_EQ(set.size(), 27u);
  for (const auto& c : set.candidates) EXPECT_EQ(effective_width(net.grids[0], c.key), 0.0);
}

TEST(Enumerate, PbLockHasSeveralColumnSelections) {
  const auto net = make_pb_lock(calibrate(CircuitKind::PLL), 16, 1);
  const auto set = enumerate_keys(make_constraint(net.view(), targets_for(net)));
  std::set<std::vector<bool>> selections;
  for (const auto& c : set.candidates) {
    std::vector<bool> on;
    for (std::size_t col = 0; col < net.grids[0].cols; ++col) on.push_back(column_on(net.grids[0], col, c.key));
    selections.insert(on);
  }
  EXPECT_GT(selections.size(), 1u);
}

TEST(Enumerate, CapOverflow) {
  const auto net = make_pb_lock(calibrate(CircuitKind::PLL), 16, 1);
  EnumerateOptions opt;
  opt.cap = 10;
  EXPECT_THROW(enumerate_keys(make_constraint(net.view(), targets_for(net)), opt), CandidateOverflow);
}

TEST(BruteCheck, LockingKeyFirstAndSmtSurvivorUnique) {
  const auto net = make_smt_lock(calibrate(CircuitKind::TWG), 16, 2);
  const auto oracle = Oracle(net).measure();
  const auto set = enumerate_keys(make_constraint(net.view(), targets_for(net)));
  const auto r = brute_check(set, net.view(), oracle.ordered());
  ASSERT_EQ(r.survivors.size(), 1u);
  EXPECT_EQ(r.survivors[0].key, net.locking_key);
  EXPECT_EQ(r.survivors[0].curve_distance, 0.0);
  EXPECT_EQ(r.checked.size(), set.size());
}

TEST(BruteCheck, PbLockSurvivorsMatchOracle) {
  const auto net = make_pb_lock(calibrate(CircuitKind::PLL), 16, 1);
  const auto oracle = Oracle(net).measure();
  const auto r = brute_check(enumerate_keys(make_constraint(net.view(), targets_for(net))), net.view(),
                             oracle.ordered());
  ASSERT_FALSE(r.no_match());
  EXPECT_EQ(r.survivors[0].curve_distance, 0.0);
  EXPECT_GT(r.survivors.size(), 1u);
  EXPECT_LT(r.simulations, r.checked.size());
  for (const auto& s : r.survivors) EXPECT_LE(s.curve_distance, kMatchTolerance);
}

TEST(BruteCheck, EmptyInputsAndNoSurvivors) {
  const auto net = make_smt_lock(calibrate(CircuitKind::OTA), 16, 3);
  const auto oracle = Oracle(net).measure();
  EXPECT_THROW(brute_check({}, net.view(), oracle.ordered()), NoMatch);
  auto targets = targets_for(net);
  targets[0] *= 1.3;
  EnumerateOptions opt;
  opt.tolerance = 0.2;
  const auto set = enumerate_keys(make_constraint(net.view(), targets), opt);
  ASSERT_FALSE(set.empty());
  EXPECT_FALSE(set.contains(net.locking_key));
  EXPECT_TRUE(brute_check(set, net.view(), oracle.ordered()).no_match());
}

TEST(Export, CsvAndSmtlib) {
  const auto net = make_smt_lock(calibrate(CircuitKind::OTA), 16, 3);
  const auto set = enumerate_keys(make_constraint(net.view(), targets_for(net)));
  const auto csv = candidates_csv(set);
  EXPECT_EQ(csv.rfind("key_hex,width_residual,curve_fitness\n" + net.locking_key.to_hex() + ",", 0), 0u);
  const auto checked = candidates_csv(brute_check(set, net.view(), Oracle(net).measure().ordered()));
  EXPECT_NE(checked.find(",0.000000000e+00\n"), std::string::npos);
  const auto smt2 = to_smtlib(make_constraint(net.view(), targets_for(net)));
  EXPECT_EQ(smt2.rfind("(set-logic QF_LRA)\n", 0), 0u);
  std::size_t decls = 0;
  for (auto p = smt2.find("declare-const"); p != std::string::npos; p = smt2.find("declare-const", p + 1)) ++decls;
  EXPECT_EQ(decls, 16u);
  EXPECT_EQ(smt2.find("e-0"), std::string::npos);
  EXPECT_EQ(std::count(smt2.begin(), smt2.end(), '('), std::count(smt2.begin(), smt2.end(), ')'));
  EXPECT_NE(smt2.find("(check-sat)"), std::string::npos);
}
