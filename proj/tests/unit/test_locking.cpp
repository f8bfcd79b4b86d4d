#include <gtest/gtest.h>

#include <algorithm>

#include "anlock/circuits/calibration.hpp"
#include "anlock/locking/generate.hpp"
#include "anlock/locking/serialize.hpp"

using namespace anlock;

namespace {

// Direct transcription of W(q) = sum_i W'_i prod_{j>=2} q'_ij with a dense
// q' matrix; absent positions hold 1.
double brute_force_width(const LockGrid& g, const Key& key) {
  std::vector<std::vector<int>> q(g.rows, std::vector<int>(g.cols, 1));
  for (std::size_t j = 0; j < g.rows; ++j)
    for (std::size_t i = 0; i < g.cols; ++i)
      if (g.placement[j * g.cols + i] && g.key_map[j * g.cols + i] >= 0)
        q[j][i] = key[g.key_map[j * g.cols + i]];
  double w = 0.0;
  for (std::size_t i = 0; i < g.cols; ++i) {
    int prod = 1;
    for (std::size_t j = 1; j < g.rows; ++j) prod *= q[j][i];
    w += g.col_widths[i] * prod;
  }
  return w;
}

LockGrid random_grid(std::size_t bits, Rng& rng) {
  LockGrid g;
  g.rows = 2 + rng.below(3);
  g.cols = (bits + g.rows - 2) / (g.rows - 1);
  g.placement.assign(g.rows * g.cols, 0);
  g.key_map.assign(g.rows * g.cols, -1);
  for (std::size_t c = 0; c < g.cols; ++c) {
    g.placement[c] = 1;
    g.col_widths.push_back(rng.uniform(0.5, 4.0));
  }
  std::vector<std::size_t> slots;
  for (std::size_t p = g.cols; p < g.rows * g.cols; ++p) slots.push_back(p);
  std::shuffle(slots.begin(), slots.end(), rng);
  for (std::size_t b = 0; b < bits; ++b) {
    g.placement[slots[b]] = 1;
    g.key_map[slots[b]] = static_cast<int>(b);
  }
  return g;
}

}  // namespace

TEST(Key, StringAndHexRoundTrip) {
  const auto k = Key::from_string("1011000111");
  EXPECT_EQ(k.to_hex(), "b1c");
  EXPECT_EQ(Key::from_hex("b1c", 10), k);
  EXPECT_EQ(Key::from_hex(k.to_hex(), k.size()).to_string(), "1011000111");
  EXPECT_THROW(Key::from_hex("b1f", 10), ParseError);
  EXPECT_THROW(Key::from_string("10x"), ParseError);
  EXPECT_EQ(Key::from_integer(5, 4).to_string(), "1010");
}

TEST(EffectiveWidth, MatchesBruteForceEvaluatorOnAllKeys) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_grid(8, rng);
    ASSERT_NO_THROW(g.validate());
    for (std::uint64_t v = 0; v < 256; ++v) {
      const auto key = Key::from_integer(v, 8);
      ASSERT_DOUBLE_EQ(effective_width(g, key), brute_force_width(g, key));
    }
  }
}

TEST(EffectiveWidth, AllOnesAndAllZeros) {
  Rng rng(3);
  const auto g = random_grid(8, rng);
  const Key ones = Key::from_string("11111111");
  EXPECT_DOUBLE_EQ(effective_width(g, ones), g.total_width());
  bool all_keyed = true;
  for (std::size_t c = 0; c < g.cols; ++c) all_keyed = all_keyed && !g.column_bits(c).empty();
  if (all_keyed) {
    EXPECT_DOUBLE_EQ(effective_width(g, Key(8)), 0.0);
  }
}

TEST(EffectiveWidth, ShortKeyThrows) {
  Rng rng(4);
  const auto g = random_grid(8, rng);
  EXPECT_THROW(effective_width(g, Key(7)), KeyLengthMismatch);
}

TEST(Partition, EqualBlocksRemainderLast) {
  EXPECT_EQ(partition_key(33, 6), (std::vector<std::size_t>{5, 5, 5, 5, 5, 8}));
  EXPECT_EQ(partition_key(16, 1), (std::vector<std::size_t>{16}));
  EXPECT_THROW(partition_key(3, 6), GenerationFailure);
}

TEST(SmtLock, LockingKeyRestoresNominalWidthAndCurve) {
  const auto base = calibrate(CircuitKind::OTA);
  const auto net = make_smt_lock(base, 32, 11);
  const auto view = net.view();
  EXPECT_EQ(locked_widths(view, net.locking_key), net.base.nominal_params);
  EXPECT_NEAR(net.base.nominal_params[0], base.nominal_params[0], 1e-12 * base.nominal_params[0]);
  const auto& grid = view.design.grid("frequency");
  EXPECT_EQ(locked_simulate(view, net.locking_key, grid), simulate(net.base, net.base.nominal_params, grid));
  for (const auto& g : net.grids) EXPECT_TRUE(has_distinct_subset_sums(g));
}

TEST(SmtLock, OtaK16HasExactlyOneMatchingKey) {
  const auto base = calibrate(CircuitKind::OTA);
  for (std::uint64_t seed : {1u, 2u}) {
    const auto net = make_smt_lock(base, 16, seed);
    const auto view = net.view();
    const auto r = key_census(view, locked_observables(view, net.locking_key));
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.examined, 65536u);
    ASSERT_EQ(r.matching, 1u);
    EXPECT_EQ(r.matches[0], net.locking_key);
  }
  EXPECT_NE(make_smt_lock(base, 16, 1).grids, make_smt_lock(base, 16, 2).grids);
}

TEST(SmtLock, K16UniqueForEveryBenchmark) {
  for (auto kind : {CircuitKind::BPF, CircuitKind::PLL, CircuitKind::TWG}) {
    const auto net = make_smt_lock(calibrate(kind), 16, 5);
    const auto view = net.view();
    EXPECT_EQ(key_census(view, locked_observables(view, net.locking_key)).matching, 1u)
        << to_string(kind);
  }
}

TEST(SmtLock, AllZeroKeyIsDegenerate) {
  const auto net = make_smt_lock(calibrate(CircuitKind::OTA), 16, 1);
  const auto view = net.view();
  EXPECT_TRUE(key_is_degenerate(view, Key(16)));
  EXPECT_THROW(locked_simulate(view, Key(16), view.design.grid("frequency")), DegenerateModel);
}

TEST(PbLock, PllK16HasSeveralMatchingKeys) {
  const auto net = make_pb_lock(calibrate(CircuitKind::PLL), 16, 1);
  const auto view = net.view();
  EXPECT_EQ(locked_widths(view, net.locking_key), net.base.nominal_params);
  CensusOptions opt;
  opt.keep = 1u << 16;
  const auto r = key_census(view, locked_observables(view, net.locking_key), opt);
  EXPECT_GT(r.matching, 1u);
  EXPECT_NE(std::find(r.matches.begin(), r.matches.end(), net.locking_key), r.matches.end());
}

TEST(PbLock, GridShape) {
  const auto net = make_pb_lock(calibrate(CircuitKind::OTA), 15, 3);
  ASSERT_EQ(net.grids.size(), 1u);
  const auto& g = net.grids[0];
  EXPECT_EQ(g.rows, 3u);
  EXPECT_EQ(g.cols, 8u);
  EXPECT_EQ(g.key_bits().size(), 15u);
  EXPECT_FALSE(g.present(2, 7));
}

TEST(Serialization, ViewOmitsKeyAndNominalWidths) {
  const auto net = make_smt_lock(calibrate(CircuitKind::BPF), 32, 9);
  const auto doc = to_json(net.view());
  const auto text = doc.dump();
  EXPECT_FALSE(doc.contains("locking_key"));
  EXPECT_EQ(text.find("nominal_params"), std::string::npos);
  EXPECT_EQ(text.find("design_targets"), std::string::npos);
  EXPECT_EQ(view_from_json(json::parse(text)), net.view());
  EXPECT_THROW(netlist_from_json(doc), ParseError);
}

TEST(Serialization, OracleSideRoundTrips) {
  const auto net = make_pb_lock(calibrate(CircuitKind::Receiver), 40, 9);
  const auto back = netlist_from_json(json::parse(to_json(net).dump()));
  EXPECT_EQ(back.locking_key, net.locking_key);
  EXPECT_EQ(back.base, net.base);
  EXPECT_EQ(back.grids, net.grids);
}
