// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bine/negabinary.hpp"

namespace bine {

enum class ButterflyKind { BineHalving, BineDoubling, RecursiveHalving, RecursiveDoubling };

std::string_view to_string(ButterflyKind kind) noexcept;

/// Signed offset (1 - (-2)^k) / 3 added to even ranks (and subtracted from odd
/// ones) when the partners differ in k = s - i negabinary digits.
std::int64_t bine_offset(unsigned k);

/// Partner of r at step i; a fixed-point-free involution for every step.
Rank butterfly_partner(ButterflyKind kind, Rank r, Step i, std::uint64_t p);

/// Ranks reachable from a rank through the butterfly steps j, j+1, ..., s-1.
///
/// For every level j the reach sets partition the ranks into classes of
/// 2^{s-j} members; construction fails if the matching sequence does not.
class ButterflyReach {
 public:
  ButterflyReach(ButterflyKind kind, std::uint64_t p);

  ButterflyKind kind() const noexcept { return kind_; }
  std::uint64_t size() const noexcept { return p_; }
  unsigned steps() const noexcept { return steps_; }

  Rank partner(Rank r, Step i) const { return partners_[i * p_ + r]; }

  /// Class label of r at level j in [0, s]; equal labels mean equal reach sets.
  Rank label(unsigned level, Rank r) const { return labels_[level * p_ + r]; }

  bool reaches(unsigned level, Rank from, Rank to) const {
    return label(level, from) == label(level, to);
  }

  std::vector<Rank> members(unsigned level, Rank r) const;

 private:
  ButterflyKind kind_;
  std::uint64_t p_;
  unsigned steps_;
  std::vector<Rank> partners_;
  std::vector<Rank> labels_;
};

}  // namespace bine
