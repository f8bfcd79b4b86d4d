#pragma once

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>

#include "anlock/smt/check.hpp"

namespace anlock::smt {

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

/// SMT-LIB decimals admit no exponent.
inline std::string decimal(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(24) << v;
  return os.str();
}

}  // namespace detail

/// key_hex,width_residual,curve_fitness; the last column is empty before checking.
inline std::string candidates_csv(const CandidateKeySet& set) {
  std::string out = "key_hex,width_residual,curve_fitness\n";
  for (const auto& c : set.candidates)
    out += c.key.to_hex() + "," + detail::sci(c.total_residual) + ",\n";
  return out;
}

inline std::string candidates_csv(const BruteCheckResult& r) {
  std::string out = "key_hex,width_residual,curve_fitness\n";
  for (const auto& c : r.checked)
    out += c.key.to_hex() + "," + detail::sci(c.width_residual) + "," +
           (std::isfinite(c.curve_distance) ? detail::sci(c.curve_distance) : "inf") + "\n";
  return out;
}

/// The lock equation as an SMT-LIB2 script over boolean key bits and real widths.
inline std::string to_smtlib(const LockConstraint& constraint, double tolerance = 0.005) {
  constraint.validate();
  std::ostringstream os;
  os << "(set-logic QF_LRA)\n";
  std::size_t k = 0;
  for (const auto& g : constraint.grids)
    for (int b : g.key_bits()) k = std::max(k, static_cast<std::size_t>(b) + 1);
  for (std::size_t b = 0; b < k; ++b) os << "(declare-const q" << b << " Bool)\n";
  for (std::size_t s = 0; s < constraint.grids.size(); ++s) {
    const auto& g = constraint.grids[s];
    os << "(define-fun w" << s << " () Real (+ 0.0";
    for (std::size_t c = 0; c < g.cols; ++c) {
      const auto bits = g.column_bits(c);
      const std::string width = detail::decimal(g.col_widths[c]);
      if (bits.empty()) {
        os << " " << width;
        continue;
      }
      os << " (ite (and true";
      for (int b : bits) os << " q" << b;
      os << ") " << width << " 0.0)";
    }
    os << "))\n";
    const double t = constraint.targets[s];
    os << "(assert (and (>= w" << s << " " << detail::decimal(t * (1.0 - tolerance)) << ") (<= w" << s
       << " " << detail::decimal(t * (1.0 + tolerance)) << ")))\n";
  }
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

}  // namespace anlock::smt
