// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/butterflies.hpp"

#include <numeric>

#include "bine/errors.hpp"

namespace bine {

std::string_view to_string(ButterflyKind kind) noexcept {
  switch (kind) {
    case ButterflyKind::BineHalving: return "bine_halving";
    case ButterflyKind::BineDoubling: return "bine_doubling";
    case ButterflyKind::RecursiveHalving: return "recursive_halving";
    case ButterflyKind::RecursiveDoubling: return "recursive_doubling";
  }
  return "unknown";
}

std::int64_t bine_offset(unsigned k) {
  if (k == 0 || k > 62) throw DomainError("digit count out of range");
  const auto pow = static_cast<std::int64_t>(1ULL << k);
  return k % 2 == 0 ? (1 - pow) / 3 : (1 + pow) / 3;
}

Rank butterfly_partner(ButterflyKind kind, Rank r, Step i, std::uint64_t p) {
  const unsigned s = step_count(p);
  if (r >= p) throw DomainError("rank " + std::to_string(r) + " out of range");
  if (i >= s) throw DomainError("step " + std::to_string(i) + " out of range");
  switch (kind) {
    case ButterflyKind::BineHalving:
    case ButterflyKind::BineDoubling: {
      const Step effective = kind == ButterflyKind::BineHalving ? i : s - 1 - i;
      const std::int64_t offset = bine_offset(s - effective);
      const auto sp = static_cast<std::int64_t>(p);
      const std::int64_t q = (r % 2 == 0) ? static_cast<std::int64_t>(r) + offset
                                          : static_cast<std::int64_t>(r) - offset;
      return static_cast<Rank>(((q % sp) + sp) % sp);
    }
    case ButterflyKind::RecursiveHalving: return r ^ (1U << (s - 1 - i));
    case ButterflyKind::RecursiveDoubling: return r ^ (1U << i);
  }
  throw DomainError("unknown butterfly kind");
}

ButterflyReach::ButterflyReach(ButterflyKind kind, std::uint64_t p)
    : kind_(kind), p_(p), steps_(step_count(p)), partners_(steps_ * p), labels_((steps_ + 1) * p) {
  for (Step i = 0; i < steps_; ++i) {
    for (Rank r = 0; r < p; ++r) partners_[i * p + r] = butterfly_partner(kind, r, i, p);
  }
  std::iota(labels_.begin() + static_cast<std::ptrdiff_t>(steps_ * p), labels_.end(), Rank{0});
  // reach(r, j) = reach(r, j+1) u reach(partner(r, j), j+1); labels are class minima.
  for (unsigned level = steps_; level-- > 0;) {
    std::vector<std::uint64_t> size(p, 0);
    std::vector<std::int64_t> paired(p, -1);
    for (Rank r = 0; r < p; ++r) {
      const Rank mine = labels_[(level + 1) * p + r];
      const Rank theirs = labels_[(level + 1) * p + partner(r, level)];
      if (mine == theirs || (paired[mine] >= 0 && paired[mine] != theirs)) {
        throw DomainError(std::string(to_string(kind)) +
                          " butterfly does not pair reach classes at step " +
                          std::to_string(level));
      }
      paired[mine] = theirs;
    }
    for (Rank r = 0; r < p; ++r) {
      const Rank mine = labels_[(level + 1) * p + r];
      const Rank theirs = labels_[(level + 1) * p + partner(r, level)];
      labels_[level * p + r] = mine < theirs ? mine : theirs;
    }
    for (Rank r = 0; r < p; ++r) ++size[labels_[level * p + r]];
    const std::uint64_t expected = 1ULL << (steps_ - level);
    for (Rank r = 0; r < p; ++r) {
      if (size[labels_[level * p + r]] != expected) {
        throw DomainError(std::string(to_string(kind)) +
                          " butterfly does not split ranks evenly at step " +
                          std::to_string(level));
      }
    }
  }
}

std::vector<Rank> ButterflyReach::members(unsigned level, Rank r) const {
  std::vector<Rank> out;
  const Rank target = label(level, r);
  for (Rank q = 0; q < p_; ++q) {
    if (label(level, q) == target) out.push_back(q);
  }
  return out;
}

}  // namespace bine
