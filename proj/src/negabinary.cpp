// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/negabinary.hpp"

#include <bit>

#include "bine/errors.hpp"

namespace bine {

namespace {

constexpr std::uint64_t kOddPositions = 0xAAAAAAAAAAAAAAAAULL;

constexpr std::uint64_t low_mask(unsigned width) noexcept {
  return width >= 64 ? ~0ULL : ((1ULL << width) - 1);
}

void check_width(unsigned width) {
  if (width < 1 || width > NegabinaryCode::kMaxWidth) {
    throw DomainError("negabinary width must be in [1, " +
                      std::to_string(NegabinaryCode::kMaxWidth) + "], got " +
                      std::to_string(width));
  }
}

}  // namespace

unsigned step_count(std::uint64_t p) {
  if (p < 2 || !is_power_of_two(p)) {
    throw UnsupportedConfiguration("rank count " + std::to_string(p) +
                                   " is not a power of two >= 2");
  }
  return static_cast<unsigned>(std::countr_zero(p));
}

std::uint64_t reverse_bits(std::uint64_t x, unsigned width) noexcept {
  std::uint64_t out = 0;
  for (unsigned j = 0; j < width; ++j) {
    out = (out << 1) | ((x >> j) & 1U);
  }
  return out;
}

std::uint64_t modulo_distance(Rank r, Rank q, std::uint64_t p) noexcept {
  const std::uint64_t a = (static_cast<std::uint64_t>(r) + p - q % p) % p;
  const std::uint64_t b = (static_cast<std::uint64_t>(q) + p - r % p) % p;
  return a < b ? a : b;
}

NegabinaryCode::NegabinaryCode(std::uint64_t bits, unsigned width) : bits_(bits), width_(width) {
  check_width(width);
  if ((bits & ~low_mask(width)) != 0) {
    throw DomainError("negabinary code has bits set above width " + std::to_string(width));
  }
}

std::int64_t NegabinaryCode::value() const noexcept {
  const std::uint64_t m = kOddPositions & low_mask(width_);
  return static_cast<std::int64_t>(bits_ ^ m) - static_cast<std::int64_t>(m);
}

NegabinaryCode NegabinaryCode::flip_low_bits(unsigned count) const {
  if (count > width_) {
    throw DomainError("cannot flip " + std::to_string(count) + " bits of a width-" +
                      std::to_string(width_) + " code");
  }
  return NegabinaryCode(bits_ ^ low_mask(count), width_);
}

std::string NegabinaryCode::to_string() const {
  std::string out(width_, '0');
  for (unsigned j = 0; j < width_; ++j) {
    if (bit(j)) out[width_ - 1 - j] = '1';
  }
  return out;
}

std::int64_t max_positive(unsigned width) {
  check_width(width);
  return static_cast<std::int64_t>(~kOddPositions & low_mask(width));
}

std::int64_t min_negative(unsigned width) {
  check_width(width);
  return NegabinaryCode(kOddPositions & low_mask(width), width).value();
}

NegabinaryCode encode_negabinary(std::int64_t x, unsigned width) {
  check_width(width);
  // (x + M) ^ M with M the odd-position mask; wraps correctly for negative x.
  const std::uint64_t raw = (static_cast<std::uint64_t>(x) + kOddPositions) ^ kOddPositions;
  if ((raw & ~low_mask(width)) != 0) {
    throw DomainError(std::to_string(x) + " is not representable on " + std::to_string(width) +
                      " negabinary digits");
  }
  return NegabinaryCode(raw, width);
}

NegabinaryCode rank2nb(Rank r, std::uint64_t p) {
  const unsigned s = step_count(p);
  if (r >= p) {
    throw DomainError("rank " + std::to_string(r) + " out of range for p = " + std::to_string(p));
  }
  const auto x = static_cast<std::int64_t>(r);
  return encode_negabinary(x <= max_positive(s) ? x : x - static_cast<std::int64_t>(p), s);
}

Rank nb2rank(const NegabinaryCode& code, std::uint64_t p) {
  const unsigned s = step_count(p);
  if (code.width() != s) {
    throw DomainError("code width " + std::to_string(code.width()) + " does not match p = " +
                      std::to_string(p));
  }
  const auto sp = static_cast<std::int64_t>(p);
  return static_cast<Rank>(((code.value() % sp) + sp) % sp);
}

unsigned trailing_equal_bits(const NegabinaryCode& code) noexcept {
  const bool first = code.bit(0);
  unsigned u = 1;
  while (u < code.width() && code.bit(u) == first) ++u;
  return u;
}

}  // namespace bine
