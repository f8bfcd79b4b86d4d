#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anlock/core/error.hpp"
#include "anlock/core/random.hpp"

namespace anlock {

/// Fixed-length bit vector. Bit 0 is the first character of the binary
/// string form and the most significant bit of the first hex digit.
class Key {
 public:
  Key() = default;
  explicit Key(std::size_t length) : bits_(length, 0) {}
  explicit Key(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  static Key from_string(std::string_view s) {
    Key k(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw ParseError("key string must be binary");
      k.bits_[i] = s[i] == '1';
    }
    return k;
  }

  static Key from_hex(std::string_view hex, std::size_t length) {
    if (hex.size() != (length + 3) / 4) throw ParseError("hex key length does not match");
    Key k(length);
    for (std::size_t d = 0; d < hex.size(); ++d) {
      const char c = hex[d];
      int v = 0;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw ParseError("invalid hex digit in key");
      for (int b = 0; b < 4; ++b) {
        const std::size_t i = 4 * d + b;
        const bool bit = (v >> (3 - b)) & 1;
        if (i < length) k.bits_[i] = bit;
        else if (bit) throw ParseError("hex key has bits beyond its length");
      }
    }
    return k;
  }

  static Key random(std::size_t length, Rng& rng) {
    Key k(length);
    for (std::size_t i = 0; i < length; ++i) k.bits_[i] = static_cast<std::uint8_t>(rng() >> 63);
    return k;
  }

  /// Low `length` bits of `value`, bit 0 of the key = least significant bit.
  static Key from_integer(std::uint64_t value, std::size_t length) {
    Key k(length);
    for (std::size_t i = 0; i < length && i < 64; ++i) k.bits_[i] = (value >> i) & 1;
    return k;
  }

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  Key slice(std::size_t offset, std::size_t length) const {
    if (offset + length > bits_.size()) throw KeyLengthMismatch("key slice out of range");
    return Key(std::vector<std::uint8_t>(bits_.begin() + offset, bits_.begin() + offset + length));
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = bits_[i] ? '1' : '0';
    return s;
  }

  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s((bits_.size() + 3) / 4, '0');
    for (std::size_t d = 0; d < s.size(); ++d) {
      int v = 0;
      for (int b = 0; b < 4; ++b) {
        const std::size_t i = 4 * d + b;
        if (i < bits_.size() && bits_[i]) v |= 1 << (3 - b);
      }
      s[d] = digits[v];
    }
    return s;
  }

  friend auto operator<=>(const Key&, const Key&) = default;
  friend bool operator==(const Key&, const Key&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull ^ k.size();
    for (auto b : k.bits()) h = (h ^ b) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace anlock
