#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "anlock/core/random.hpp"
#include "anlock/locking/census.hpp"

namespace anlock {

/// Contiguous equal blocks of the key per slot, remainder to the last slot.
inline std::vector<std::size_t> partition_key(std::size_t k, std::size_t slots) {
  if (slots == 0 || k < slots)
    throw GenerationFailure("key length " + std::to_string(k) + " cannot cover " +
                            std::to_string(slots) + " slots");
  std::vector<std::size_t> bits(slots, k / slots);
  bits.back() += k % slots;
  return bits;
}

struct LockOptions {
  std::optional<std::vector<std::size_t>> slot_bits;  // overrides the equal partition
  std::size_t max_attempts = 32;
  std::size_t verify_bits = 20;  // response-level census up to this key length
};

namespace detail {

inline std::vector<std::size_t> resolve_slot_bits(const CircuitModel& base, std::size_t k,
                                                  const LockOptions& opt) {
  const std::size_t slots = param_count(base.kind());
  if (!opt.slot_bits) return partition_key(k, slots);
  const auto& bits = *opt.slot_bits;
  if (bits.size() != slots) throw GenerationFailure("slot_bits needs one entry per slot");
  if (std::accumulate(bits.begin(), bits.end(), std::size_t{0}) != k)
    throw GenerationFailure("slot_bits must sum to k");
  for (auto b : bits)
    if (b == 0) throw GenerationFailure("every slot needs at least one key bit");
  return bits;
}

inline LockGrid empty_grid(std::size_t rows, std::size_t cols) {
  LockGrid g;
  g.rows = rows;
  g.cols = cols;
  g.col_widths.assign(cols, 0.0);
  g.placement.assign(rows * cols, 0);
  g.key_map.assign(rows * cols, -1);
  for (std::size_t c = 0; c < cols; ++c) g.placement[c] = 1;
  return g;
}

/// Single keyed row over a binary ladder u * 2^e in shuffled order; the
/// secret selection S* fixes u = W_nom / S*.
inline LockGrid smt_grid(double w_nom, std::size_t bits, std::size_t offset, Key& key, Rng& rng) {
  auto g = empty_grid(2, bits);
  std::vector<int> exponent(bits);
  std::iota(exponent.begin(), exponent.end(), 0);
  for (std::size_t i = bits; i > 1; --i) std::swap(exponent[i - 1], exponent[rng.below(i)]);
  std::vector<std::uint8_t> selected(bits, 0);
  double sum = 0.0;
  while (sum == 0.0) {
    sum = 0.0;
    for (std::size_t e = 0; e < bits; ++e) {
      selected[e] = static_cast<std::uint8_t>(rng() >> 63);
      if (selected[e]) sum += std::ldexp(1.0, static_cast<int>(e));
    }
  }
  const double unit = w_nom / sum;
  for (std::size_t c = 0; c < bits; ++c) {
    g.placement[bits + c] = 1;
    g.key_map[bits + c] = static_cast<int>(offset + c);
    g.col_widths[c] = std::ldexp(unit, exponent[c]);
    key.set(offset + c, selected[exponent[c]]);
  }
  return g;
}

/// Three rows, two series switches per column, widths from {1,2,3,4} * u.
/// An odd bit count leaves the last column with a single switch.
inline LockGrid pb_grid(double w_nom, std::size_t bits, std::size_t offset, Key& key, Rng& rng) {
  const std::size_t cols = (bits + 1) / 2;
  auto g = empty_grid(3, cols);
  std::vector<int> mult(cols);
  for (auto& m : mult) m = 1 + static_cast<int>(rng.below(4));
  int bit = static_cast<int>(offset);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 1; r < 3; ++r) {
      if (r == 2 && bits % 2 == 1 && c == cols - 1) continue;
      g.placement[r * cols + c] = 1;
      g.key_map[r * cols + c] = bit++;
    }
  for (int attempt = 0;; ++attempt) {
    if (attempt == 64) throw GenerationFailure("could not draw a conducting PB-Lock key");
    for (std::size_t b = 0; b < bits; ++b) key.set(offset + b, rng() >> 63);
    int selected = 0;
    for (std::size_t c = 0; c < cols; ++c)
      if (column_on(g, c, key)) selected += mult[c];
    if (selected == 0) continue;
    const double unit = w_nom / selected;
    for (std::size_t c = 0; c < cols; ++c) g.col_widths[c] = unit * mult[c];
    return g;
  }
}

template <typename MakeGrid>
LockedNetlist build_lock(const CircuitModel& base, LockScheme scheme, std::size_t k,
                         const std::vector<std::size_t>& slot_bits, Rng& rng,
                         MakeGrid&& make_grid) {
  LockedNetlist net;
  net.base = base;
  net.scheme = scheme;
  net.k = k;
  net.locking_key = Key(k);
  std::size_t offset = 0;
  for (std::size_t s = 0; s < slot_bits.size(); ++s) {
    net.grids.push_back(
        make_grid(base.nominal_params[s], slot_bits[s], offset, net.locking_key, rng));
    offset += slot_bits[s];
  }
  net.base.nominal_params = locked_widths(net.view(), net.locking_key);
  return net;
}

}  // namespace detail

/// SMT-Lock: exactly one key reproduces the nominal response. Every grid has
/// distinct column subset sums; for k up to `verify_bits` the uniqueness is
/// also checked by an exhaustive response census, redrawing on failure.
inline LockedNetlist make_smt_lock(const CircuitModel& base, std::size_t k, std::uint64_t seed,
                                   const LockOptions& opt = {}) {
  validate_params(base.kind(), base.nominal_params);
  const auto slot_bits = detail::resolve_slot_bits(base, k, opt);
  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
    auto net = detail::build_lock(base, LockScheme::SmtLock, k, slot_bits, rng, detail::smt_grid);
    bool ok = true;
    for (const auto& g : net.grids) ok = ok && has_distinct_subset_sums(g);
    if (ok && k <= opt.verify_bits) {
      const auto view = net.view();
      const auto oracle = locked_observables(view, net.locking_key);
      CensusOptions copt;
      copt.stop_after = 2;
      ok = key_census(view, oracle, copt).matching == 1;
    }
    if (ok) return net;
  }
  throw GenerationFailure("no unique SMT-Lock instance after " +
                          std::to_string(opt.max_attempts) + " attempts");
}

/// PB-Lock: random key, column widths from a small multiset so that many keys
/// reproduce the nominal width.
inline LockedNetlist make_pb_lock(const CircuitModel& base, std::size_t k, std::uint64_t seed,
                                  const LockOptions& opt = {}) {
  validate_params(base.kind(), base.nominal_params);
  const auto slot_bits = detail::resolve_slot_bits(base, k, opt);
  Rng rng(seed);
  return detail::build_lock(base, LockScheme::PbLock, k, slot_bits, rng, detail::pb_grid);
}

inline LockedNetlist make_lock(LockScheme scheme, const CircuitModel& base, std::size_t k,
                               std::uint64_t seed, const LockOptions& opt = {}) {
  return scheme == LockScheme::SmtLock ? make_smt_lock(base, k, seed, opt)
                                       : make_pb_lock(base, k, seed, opt);
}

}  // namespace anlock
