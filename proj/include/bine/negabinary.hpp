// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace bine {

using Rank = std::uint32_t;
using Step = std::uint32_t;

constexpr bool is_power_of_two(std::uint64_t x) noexcept { return x != 0 && (x & (x - 1)) == 0; }

/// log2 of a power of two >= 2; throws UnsupportedConfiguration otherwise.
unsigned step_count(std::uint64_t p);

/// Reverses the order of the low `width` bits of `x`.
std::uint64_t reverse_bits(std::uint64_t x, unsigned width) noexcept;

/// Modulo (circular) distance between two ranks on a ring of p ranks.
std::uint64_t modulo_distance(Rank r, Rank q, std::uint64_t p) noexcept;

/// A fixed-width bit pattern read in base -2.
///
/// The width is part of the value: 010 and 0010 compare unequal.
class NegabinaryCode {
 public:
  static constexpr unsigned kMaxWidth = 62;

  NegabinaryCode(std::uint64_t bits, unsigned width);

  std::uint64_t bits() const noexcept { return bits_; }
  unsigned width() const noexcept { return width_; }
  bool bit(unsigned j) const noexcept { return ((bits_ >> j) & 1U) != 0; }

  /// Sum of b_j * (-2)^j.
  std::int64_t value() const noexcept;

  /// Flips the `count` least significant bits.
  NegabinaryCode flip_low_bits(unsigned count) const;

  /// Most significant bit first, e.g. "110".
  std::string to_string() const;

  friend bool operator==(const NegabinaryCode&, const NegabinaryCode&) = default;

 private:
  std::uint64_t bits_;
  unsigned width_;
};

/// Largest value representable on `width` negabinary digits (pattern ...0101).
std::int64_t max_positive(unsigned width);

/// Smallest value representable on `width` negabinary digits (pattern ...1010).
std::int64_t min_negative(unsigned width);

/// Encodes `x` on `width` digits; throws DomainError if it does not fit.
NegabinaryCode encode_negabinary(std::int64_t x, unsigned width);

/// Rank identifier to its negabinary code for a collective on p ranks.
/// Ranks above max_positive(log2 p) are encoded as r - p.
NegabinaryCode rank2nb(Rank r, std::uint64_t p);

/// Inverse of rank2nb: the code's value reduced modulo p.
Rank nb2rank(const NegabinaryCode& code, std::uint64_t p);

/// Length of the run of equal bits starting at the least significant bit.
unsigned trailing_equal_bits(const NegabinaryCode& code) noexcept;

}  // namespace bine
