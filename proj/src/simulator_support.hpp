// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bine/schedule.hpp"

namespace bine::detail {

/// Shape of the buffers a schedule works on.
struct BufferShape {
  Collective collective;
  std::uint64_t p;
  Rank root;
  std::uint32_t num_blocks;
  unsigned segments;
  const std::vector<std::uint32_t>* owned = nullptr;

  std::uint64_t slots() const { return std::uint64_t{num_blocks} * segments; }

  /// Block id carried by a slot of `rank` before any data moves.
  std::uint32_t input_block(Rank rank, std::uint64_t slot) const {
    if (collective == Collective::Alltoall) {
      const std::uint64_t b = slot / segments;
      return static_cast<std::uint32_t>((rank * p + b) * segments + slot % segments);
    }
    return static_cast<std::uint32_t>(slot);
  }

  /// True if `rank` starts with data in `slot`.
  bool has_input(Rank rank, std::uint64_t slot) const {
    switch (collective) {
      case Collective::Broadcast:
      case Collective::Scatter:
        return rank == root;
      case Collective::Gather:
      case Collective::Allgather:
        return slot / segments == rank;
      default:
        return true;
    }
  }
};

/// Expected content of one slot; nullopt origin means "all ranks".
struct Expectation {
  bool specified = false;
  std::uint32_t block = 0;
  std::optional<Rank> origin;
};

inline Expectation expected_slot(const BufferShape& shape, Rank rank, std::uint64_t slot) {
  const std::uint64_t b = slot / shape.segments;
  const auto seg = static_cast<std::uint32_t>(slot % shape.segments);
  Expectation e;
  e.specified = true;
  e.block = static_cast<std::uint32_t>(slot);
  switch (shape.collective) {
    case Collective::Broadcast:
      e.origin = shape.root;
      break;
    case Collective::Reduce:
      e.specified = rank == shape.root;
      break;
    case Collective::Gather:
      e.specified = rank == shape.root;
      e.origin = static_cast<Rank>(b);
      break;
    case Collective::Scatter:
      e.specified = b == rank;
      e.origin = shape.root;
      break;
    case Collective::Allgather:
      e.origin = static_cast<Rank>(b);
      break;
    case Collective::ReduceScatter: {
      const bool custom = shape.owned != nullptr && !shape.owned->empty();
      e.specified = b == (custom ? (*shape.owned)[rank] : rank);
      break;
    }
    case Collective::Allreduce:
      break;
    case Collective::Alltoall:
      e.block = static_cast<std::uint32_t>((b * shape.p + rank) * shape.segments + seg);
      e.origin = static_cast<Rank>(b);
      break;
  }
  return e;
}

/// Validates a per-rank permutation over `size` positions.
inline bool is_permutation_of(const Permutation& perm, std::uint32_t size) {
  if (perm.size() != size) return false;
  std::vector<bool> seen(size, false);
  for (std::uint32_t v : perm) {
    if (v >= size || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace bine::detail
