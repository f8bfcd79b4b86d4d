#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "anlock/core/error.hpp"
#include "anlock/locking/key.hpp"

namespace anlock::ga {

enum class Encoding { Binary, Real };

inline std::string_view to_string(Encoding e) { return e == Encoding::Binary ? "binary" : "real"; }

struct Chromosome {
  Encoding encoding = Encoding::Binary;
  std::vector<std::uint8_t> bits;
  std::vector<double> reals;
  std::size_t age = 0;
  std::optional<double> fitness;

  static Chromosome binary(std::vector<std::uint8_t> genes, std::size_t age = 0) {
    Chromosome c;
    c.encoding = Encoding::Binary;
    c.bits = std::move(genes);
    c.age = age;
    return c;
  }

  static Chromosome binary(const Key& key, std::size_t age = 0) {
    return binary(std::vector<std::uint8_t>(key.bits().begin(), key.bits().end()), age);
  }

  static Chromosome real(std::vector<double> genes, std::size_t age = 0) {
    Chromosome c;
    c.encoding = Encoding::Real;
    c.reals = std::move(genes);
    c.age = age;
    return c;
  }

  std::size_t length() const { return encoding == Encoding::Binary ? bits.size() : reals.size(); }
  bool evaluated() const { return fitness.has_value(); }
  double score() const { return fitness.value(); }

  Key key() const {
    if (encoding != Encoding::Binary) throw EncodingMismatch("real chromosome has no key");
    return Key(bits);
  }

  bool same_genes(const Chromosome& o) const {
    return encoding == o.encoding && bits == o.bits && reals == o.reals;
  }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

}  // namespace anlock::ga
