#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "anlock/core/error.hpp"
#include "anlock/locking/key.hpp"

namespace anlock {

/// m x n transistor grid replacing one bias transistor.
///
/// Row 0 carries the width-setting device of each column (width W'_i);
/// rows 1..m-1 are series switches gated by key bits. A column conducts only
/// when every present switch in it sees a 1; absent positions count as 1:
///
///   W(q) = sum_i W'_i * prod_{j >= 1} q'_{ji}
struct LockGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> col_widths;
  std::vector<std::uint8_t> placement;  // rows x cols, row-major
  std::vector<int> key_map;             // rows x cols, -1 = no key bit

  bool present(std::size_t r, std::size_t c) const { return placement[r * cols + c] != 0; }
  int key_bit(std::size_t r, std::size_t c) const { return key_map[r * cols + c]; }

  /// Key bits gating column c, top to bottom.
  std::vector<int> column_bits(std::size_t c) const {
    std::vector<int> bits;
    for (std::size_t r = 1; r < rows; ++r)
      if (present(r, c)) bits.push_back(key_bit(r, c));
    return bits;
  }

  std::vector<int> key_bits() const {
    std::vector<int> bits;
    for (std::size_t c = 0; c < cols; ++c)
      for (int b : column_bits(c)) bits.push_back(b);
    std::sort(bits.begin(), bits.end());
    return bits;
  }

  double total_width() const {
    double s = 0.0;
    for (double w : col_widths) s += w;
    return s;
  }

  double min_width() const { return *std::min_element(col_widths.begin(), col_widths.end()); }

  void validate() const {
    if (rows < 1 || cols < 1) throw InvalidParams("lock grid needs at least one row and column");
    if (col_widths.size() != cols || placement.size() != rows * cols ||
        key_map.size() != rows * cols)
      throw InvalidParams("lock grid arrays do not match its shape");
    for (double w : col_widths)
      if (!(w > 0.0)) throw InvalidParams("column widths must be positive");
    std::set<int> seen;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!present(0, c) || key_bit(0, c) != -1)
        throw InvalidParams("row 0 must hold an unkeyed width device in every column");
      for (std::size_t r = 1; r < rows; ++r) {
        const int b = key_bit(r, c);
        if (present(r, c) != (b >= 0))
          throw InvalidParams("every present switch needs exactly one key bit");
        if (b >= 0 && !seen.insert(b).second)
          throw InvalidParams("key bit assigned to more than one position");
      }
    }
  }

  friend bool operator==(const LockGrid&, const LockGrid&) = default;
};

inline bool column_on(const LockGrid& grid, std::size_t c, const Key& key) {
  for (std::size_t r = 1; r < grid.rows; ++r) {
    if (!grid.present(r, c)) continue;
    const int b = grid.key_bit(r, c);
    if (static_cast<std::size_t>(b) >= key.size())
      throw KeyLengthMismatch("key has " + std::to_string(key.size()) +
                              " bits, grid references bit " + std::to_string(b));
    if (!key[static_cast<std::size_t>(b)]) return false;
  }
  return true;
}

/// Key-dependent effective width of the grid. Zero when every column is off.
inline double effective_width(const LockGrid& grid, const Key& key) {
  double w = 0.0;
  for (std::size_t c = 0; c < grid.cols; ++c)
    if (column_on(grid, c, key)) w += grid.col_widths[c];
  return w;
}

/// True when no two distinct column subsets share a width sum.
inline bool has_distinct_subset_sums(const LockGrid& grid) {
  std::vector<double> w = grid.col_widths;
  std::sort(w.begin(), w.end());
  double below = 0.0;
  double prev = 0.0;
  for (double x : w) {
    if (!(x > below) && !(prev > 0.0 && x >= 2.0 * prev)) return false;
    below += x;
    prev = x;
  }
  return true;
}

}  // namespace anlock
