// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bine/negabinary.hpp"

namespace bine {

enum class Collective {
  Broadcast,
  Reduce,
  Gather,
  Scatter,
  Allgather,
  ReduceScatter,
  Allreduce,
  Alltoall,
};

std::string_view to_string(Collective c) noexcept;
Collective parse_collective(std::string_view name);
const std::vector<Collective>& all_collectives();

/// Broadcast, reduce, gather and scatter have a root.
bool is_rooted(Collective c) noexcept;

/// Circular block range [first, last] modulo `modulus`.
class BlockRange {
 public:
  BlockRange(std::int64_t first, std::int64_t last, std::uint32_t modulus);

  std::uint32_t first() const noexcept { return first_; }
  std::uint32_t last() const noexcept { return last_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t size() const noexcept;
  bool contains(std::int64_t block) const noexcept;
  /// Block indices from first to last, wrapping.
  std::vector<std::uint32_t> blocks() const;

  friend bool operator==(const BlockRange&, const BlockRange&) = default;

 private:
  std::uint32_t first_;
  std::uint32_t last_;
  std::uint32_t modulus_;
};

/// One directed message. `blocks` are buffer positions at the sender; the
/// receiver stores block k at dst_blocks[k], or at the same position when
/// dst_blocks is empty.
struct Transfer {
  Rank src = 0;
  Rank dst = 0;
  std::vector<std::uint32_t> blocks;
  std::vector<std::uint32_t> dst_blocks;
  std::uint64_t block_bytes = 0;
  bool reduce = false;

  std::uint64_t bytes() const noexcept { return block_bytes * blocks.size(); }
  std::uint32_t dst_block(std::size_t k) const {
    return dst_blocks.empty() ? blocks[k] : dst_blocks[k];
  }

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

/// Local block permutation: the block at position k moves to position perm[k].
using Permutation = std::vector<std::uint32_t>;

struct CommSchedule {
  Collective collective = Collective::Broadcast;
  std::string algorithm;
  std::uint64_t p = 0;
  Rank root = 0;
  /// Vector bytes (per-rank send buffer for alltoall).
  std::uint64_t n = 0;
  /// Blocks in every rank's buffer: 1 for whole-vector algorithms, p otherwise.
  std::uint32_t num_blocks = 1;
  std::uint64_t block_bytes = 0;
  bool single_ported = true;
  std::vector<std::vector<Transfer>> steps;
  /// Empty, one permutation shared by all ranks, or one per rank.
  std::vector<Permutation> initial_permutation;
  std::vector<Permutation> final_permutation;
  /// Reduce-scatter only: block that rank j owns at the end (empty = block j).
  std::vector<std::uint32_t> result_blocks;

  std::size_t step_count() const noexcept { return steps.size(); }
  std::uint64_t total_bytes() const noexcept;

  friend bool operator==(const CommSchedule&, const CommSchedule&) = default;
};

/// Permutation applying to `rank`, or nullptr when there is none.
const Permutation* permutation_for(const std::vector<Permutation>& perms, Rank rank);

/// Bytes sent by every rank over the whole schedule.
std::vector<std::uint64_t> sent_bytes_per_rank(const CommSchedule& schedule);

/// blocks[step][rank]: number of blocks sent by `rank` at `step`.
std::vector<std::vector<std::uint64_t>> sent_blocks_per_step(const CommSchedule& schedule);

/// Sorts every step by (src, dst).
void canonicalize(CommSchedule& schedule);

}  // namespace bine
