#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "anlock/smt/constraint.hpp"

namespace anlock::smt {

struct Candidate {
  Key key;
  std::vector<double> residuals;  // |W(q) - W_target| per slot
  double total_residual = 0.0;
};

struct CandidateKeySet {
  std::vector<Candidate> candidates;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
  bool contains(const Key& key) const {
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](const Candidate& c) { return c.key == key; });
  }
  std::vector<Key> keys() const {
    std::vector<Key> out;
    for (const auto& c : candidates) out.push_back(c.key);
    return out;
  }
};

struct EnumerateOptions {
  double tolerance = 0.005;  // relative to the slot's target width
  std::size_t cap = 1'000'000;
};

inline bool width_matches(double width, double target, double tol) {
  return std::abs(width - target) <= tol * target;
}

namespace detail {

/// One way to set a slot's key bits, aligned with the slot's sorted bit list.
struct SlotOption {
  std::vector<std::uint8_t> values;
  double residual;
};

/// Column on/off states whose width sum lies within tolerance of the target.
inline std::vector<std::vector<bool>> column_selections(const LockGrid& g, double target,
                                                        double tol, std::size_t cap) {
  std::vector<std::size_t> order(g.cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return g.col_widths[a] > g.col_widths[b]; });
  std::vector<double> rest(g.cols + 1, 0.0);
  for (std::size_t i = g.cols; i-- > 0;) rest[i] = rest[i + 1] + g.col_widths[order[i]];
  const double slack = 1e-12 * (target + rest[0]);
  const double lo = target * (1.0 - tol) - slack;
  const double hi = target * (1.0 + tol) + slack;

  std::vector<std::vector<bool>> out;
  std::vector<bool> on(g.cols, false);
  auto dfs = [&](auto&& self, std::size_t i, double sum) -> void {
    if (sum > hi || sum + rest[i] < lo) return;
    // Columns below the rounding slack cannot move the sum across the band edge.
    if (i < g.cols && rest[i] <= slack && !width_matches(sum, target, tol)) return;
    if (i == g.cols) {
      double w = 0.0;
      for (std::size_t c = 0; c < g.cols; ++c)
        if (on[c]) w += g.col_widths[c];
      if (width_matches(w, target, tol)) {
        if (out.size() >= cap) throw CandidateOverflow("candidate key set exceeds the cap");
        out.push_back(on);
      }
      return;
    }
    const std::size_t c = order[i];
    on[c] = true;
    self(self, i + 1, sum + g.col_widths[c]);
    on[c] = false;
    if (!g.column_bits(c).empty()) self(self, i + 1, sum);
  };
  dfs(dfs, 0, 0.0);
  return out;
}

/// Expands column states into key-bit assignments: ON columns have all bits
/// set, OFF columns take every pattern except all ones.
inline std::vector<SlotOption> slot_options(const LockGrid& g, double target, double tol,
                                            std::size_t cap) {
  const auto bits = g.key_bits();
  auto index_of = [&](int b) {
    return static_cast<std::size_t>(std::lower_bound(bits.begin(), bits.end(), b) - bits.begin());
  };
  std::vector<SlotOption> out;
  for (const auto& on : column_selections(g, target, tol, cap)) {
    double w = 0.0;
    double count = 1.0;
    for (std::size_t c = 0; c < g.cols; ++c) {
      if (on[c])
        w += g.col_widths[c];
      else
        count *= std::ldexp(1.0, static_cast<int>(g.column_bits(c).size())) - 1.0;
    }
    if (static_cast<double>(out.size()) + count > static_cast<double>(cap))
      throw CandidateOverflow("candidate key set exceeds the cap");
    SlotOption base{std::vector<std::uint8_t>(bits.size(), 1), std::abs(w - target)};
    std::vector<std::vector<int>> off;
    for (std::size_t c = 0; c < g.cols; ++c)
      if (!on[c]) off.push_back(g.column_bits(c));
    auto expand = [&](auto&& self, std::size_t i, SlotOption& opt) -> void {
      if (i == off.size()) {
        out.push_back(opt);
        return;
      }
      const auto& cb = off[i];
      const std::uint64_t all = (std::uint64_t{1} << cb.size()) - 1;
      for (std::uint64_t p = 0; p < all; ++p) {
        for (std::size_t j = 0; j < cb.size(); ++j) opt.values[index_of(cb[j])] = (p >> j) & 1;
        self(self, i + 1, opt);
      }
    };
    expand(expand, 0, base);
  }
  return out;
}

}  // namespace detail

/// Every key whose per-slot width matches its target within the relative
/// tolerance, ascending by total width residual.
inline CandidateKeySet enumerate_keys(const LockConstraint& constraint,
                                      const EnumerateOptions& opt = {}) {
  constraint.validate();
  std::size_t k = 0;
  std::vector<std::vector<detail::SlotOption>> slots;
  std::vector<std::vector<int>> slot_bits;
  double total = 1.0;
  for (std::size_t s = 0; s < constraint.grids.size(); ++s) {
    const auto& g = constraint.grids[s];
    slots.push_back(detail::slot_options(g, constraint.targets[s], opt.tolerance, opt.cap));
    total *= static_cast<double>(slots.back().size());
    if (total > static_cast<double>(opt.cap))
      throw CandidateOverflow("candidate key set exceeds the cap");
    slot_bits.push_back(g.key_bits());
    for (int b : slot_bits.back()) k = std::max(k, static_cast<std::size_t>(b) + 1);
  }
  CandidateKeySet set;
  if (total == 0.0) return set;
  std::vector<std::size_t> pick(slots.size(), 0);
  while (true) {
    Candidate c{Key(k), {}, 0.0};
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto& o = slots[s][pick[s]];
      const auto& bits = slot_bits[s];
      for (std::size_t j = 0; j < bits.size(); ++j) c.key.set(bits[j], o.values[j]);
      c.residuals.push_back(o.residual);
      c.total_residual += o.residual;
    }
    set.candidates.push_back(std::move(c));
    std::size_t s = 0;
    while (s < slots.size() && ++pick[s] == slots[s].size()) pick[s++] = 0;
    if (s == slots.size()) break;
  }
  std::stable_sort(set.candidates.begin(), set.candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.total_residual != b.total_residual) return a.total_residual < b.total_residual;
                     return a.key < b.key;
                   });
  return set;
}

}  // namespace anlock::smt
