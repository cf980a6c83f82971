// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "bine/builders.hpp"
#include "bine/butterflies.hpp"
#include "bine/errors.hpp"
#include "bine/schedule.hpp"

namespace bine::detail {

using BlockList = std::vector<std::uint32_t>;

inline Rank to_actual(Rank v, Rank root, std::uint64_t p) {
  return static_cast<Rank>((v + root) % p);
}

inline void check_root(Rank root, std::uint64_t p) {
  if (root >= p) {
    throw DomainError("root " + std::to_string(root) + " out of range for p = " + std::to_string(p));
  }
}

inline void check_ranks(std::uint64_t p) {
  if (p < 2) throw UnsupportedConfiguration("collectives need at least 2 ranks");
  if (p > (1ULL << 20)) throw UnsupportedConfiguration("rank count too large");
}

class ScheduleBuilder {
 public:
  ScheduleBuilder(Collective collective, std::string algorithm, std::uint64_t p, Rank root,
                  std::uint64_t n, bool split_into_blocks) {
    check_ranks(p);
    if (n == 0) throw UnsupportedConfiguration("vector size must be at least 1 byte");
    schedule_.collective = collective;
    schedule_.algorithm = std::move(algorithm);
    schedule_.p = p;
    schedule_.root = root;
    schedule_.n = n;
    if (split_into_blocks) {
      if (n < p) {
        throw UnsupportedConfiguration("vector of " + std::to_string(n) +
                                       " bytes cannot be split into " + std::to_string(p) +
                                       " blocks");
      }
      schedule_.num_blocks = static_cast<std::uint32_t>(p);
      schedule_.block_bytes = (n + p - 1) / p;
    } else {
      schedule_.num_blocks = 1;
      schedule_.block_bytes = n;
    }
  }

  CommSchedule& schedule() { return schedule_; }
  std::uint64_t p() const { return schedule_.p; }

  /// Index of the next step to be opened.
  std::size_t next_step() const { return schedule_.steps.size(); }

  std::size_t open_step() {
    schedule_.steps.emplace_back();
    return schedule_.steps.size() - 1;
  }

  void add(std::size_t step, Rank src, Rank dst, BlockList blocks, bool reduce,
           BlockList dst_blocks = {}) {
    if (blocks.empty()) return;
    Transfer t;
    t.src = src;
    t.dst = dst;
    t.blocks = std::move(blocks);
    t.dst_blocks = std::move(dst_blocks);
    t.block_bytes = schedule_.block_bytes;
    t.reduce = reduce;
    schedule_.steps.at(step).push_back(std::move(t));
  }

  /// Sends the whole (single-block) vector.
  void add_whole(std::size_t step, Rank src, Rank dst, bool reduce) {
    BlockList all(schedule_.num_blocks);
    for (std::uint32_t k = 0; k < all.size(); ++k) all[k] = k;
    add(step, src, dst, std::move(all), reduce);
  }

  CommSchedule finish() {
    canonicalize(schedule_);
    return std::move(schedule_);
  }

 private:
  CommSchedule schedule_;
};

/// Butterfly reduce-scatter over virtual ranks. Block k ends at the rank
/// owner[k] (virtual); at every step a rank keeps the half whose owners stay in
/// its own reach set and sends the rest to its partner.
void append_butterfly_reduce_scatter(ScheduleBuilder& builder, const ButterflyReach& reach,
                                     const std::vector<Rank>& owner, Rank root);

/// Butterfly allgather over virtual ranks: at each step a rank sends its
/// partner every held block the partner lacks. `held` (sorted, per virtual
/// rank) is updated in place.
void append_butterfly_allgather(ScheduleBuilder& builder, ButterflyKind kind,
                                std::vector<BlockList>& held, Rank root);

/// Owner of every block when the Bine reduce-scatter runs with the contiguous
/// layout: block reverse(nu(v)) ends at virtual rank v.
std::vector<Rank> contiguous_owner(std::uint64_t p);

void append_ring_reduce_scatter(ScheduleBuilder& builder);
void append_ring_allgather(ScheduleBuilder& builder);

}  // namespace bine::detail
