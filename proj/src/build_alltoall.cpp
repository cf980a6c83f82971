// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include <functional>
#include <stdexcept>

#include "bine/negabinary.hpp"
#include "builder_support.hpp"

namespace bine {

using detail::BlockList;
using detail::ScheduleBuilder;

namespace {

struct Piece {
  Rank src;
  Rank dst;
};

/// Next hop of a block (src -> dst) currently held by `at` during `step`;
/// returning `at` keeps it in place.
using HopFn = std::function<Rank(std::size_t step, Rank at, Piece piece)>;

/// Moves every block along its hops. A receiver stores incoming blocks, in
/// sender order, into the positions it vacated in the same step; the final
/// permutation then restores source order.
CommSchedule route(ScheduleBuilder& builder, std::size_t steps, const HopFn& hop) {
  const std::uint64_t p = builder.p();
  std::vector<std::vector<Piece>> layout(p, std::vector<Piece>(p));
  for (Rank x = 0; x < p; ++x) {
    for (Rank k = 0; k < p; ++k) layout[x][k] = {x, k};
  }
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t step = builder.open_step();
    // outgoing[x] lists (destination rank, position) in position order.
    std::vector<std::vector<std::pair<Rank, std::uint32_t>>> outgoing(p);
    std::vector<BlockList> vacated(p);
    for (Rank x = 0; x < p; ++x) {
      for (std::uint32_t k = 0; k < p; ++k) {
        const Rank next = hop(t, x, layout[x][k]);
        if (next == x) continue;
        outgoing[x].emplace_back(next, k);
        vacated[x].push_back(k);
      }
    }
    std::vector<std::size_t> filled(p, 0);
    auto next_layout = layout;
    for (Rank x = 0; x < p; ++x) {
      std::stable_sort(outgoing[x].begin(), outgoing[x].end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t j = 0; j < outgoing[x].size();) {
        const Rank y = outgoing[x][j].first;
        BlockList blocks;
        BlockList slots;
        for (; j < outgoing[x].size() && outgoing[x][j].first == y; ++j) {
          if (filled[y] >= vacated[y].size()) {
            throw std::logic_error("alltoall routing overfills rank " + std::to_string(y));
          }
          const std::uint32_t slot = vacated[y][filled[y]++];
          blocks.push_back(outgoing[x][j].second);
          slots.push_back(slot);
          next_layout[y][slot] = layout[x][outgoing[x][j].second];
        }
        builder.add(step, x, y, std::move(blocks), false, std::move(slots));
      }
    }
    for (Rank y = 0; y < p; ++y) {
      if (filled[y] != vacated[y].size()) {
        throw std::logic_error("alltoall routing leaves holes at rank " + std::to_string(y));
      }
    }
    layout = std::move(next_layout);
  }

  CommSchedule& schedule = builder.schedule();
  std::vector<Permutation> perms(p, Permutation(p));
  bool identity = true;
  for (Rank x = 0; x < p; ++x) {
    for (std::uint32_t k = 0; k < p; ++k) {
      if (layout[x][k].dst != x) throw std::logic_error("alltoall routing did not deliver");
      perms[x][k] = layout[x][k].src;
      identity = identity && layout[x][k].src == k;
    }
  }
  if (!identity) schedule.final_permutation = std::move(perms);
  return builder.finish();
}

}  // namespace

CommSchedule build_alltoall(std::uint64_t p, std::uint64_t n, AlltoallVariant variant) {
  detail::check_ranks(p);
  switch (variant) {
    case AlltoallVariant::Bine: {
      // Block (src -> dst) walks the distance-halving Bine tree rooted at src.
      // Seen from an even source the tree is shifted by src, from an odd one it
      // is mirrored, so every hop is an edge of the Bine butterfly.
      const unsigned s = step_count(p);
      ScheduleBuilder b(Collective::Alltoall, "bine", p, 0, n, true);
      std::vector<std::uint64_t> code(p);
      for (Rank v = 0; v < p; ++v) code[v] = rank2nb(v, p).bits();
      return route(b, s, [p, s, &code](std::size_t i, Rank at, Piece piece) {
        const Rank partner = butterfly_partner(ButterflyKind::BineHalving, at,
                                               static_cast<Step>(i), p);
        auto tree_rank = [&](Rank r) {
          return piece.src % 2 == 0 ? (r + p - piece.src) % p : (piece.src + p - r) % p;
        };
        const unsigned shift = s - static_cast<unsigned>(i) - 1;
        const bool below = (code[tree_rank(piece.dst)] >> shift) == (code[tree_rank(partner)] >> shift);
        return below ? partner : at;
      });
    }
    case AlltoallVariant::Bruck: {
      const unsigned s = step_count(p);
      ScheduleBuilder b(Collective::Alltoall, "bruck", p, 0, n, true);
      return route(b, s, [p](std::size_t i, Rank at, Piece piece) {
        const std::uint64_t distance = (at + p - piece.dst) % p;
        if (((distance >> i) & 1U) == 0) return at;
        return static_cast<Rank>((at + p - (1ULL << i)) % p);
      });
    }
    case AlltoallVariant::Pairwise: {
      // Step k: r sends its block for r + k, which lands in the slot the
      // receiver frees in the same step.
      ScheduleBuilder b(Collective::Alltoall, "pairwise", p, 0, n, true);
      for (std::uint64_t k = 1; k < p; ++k) {
        const std::size_t step = b.open_step();
        for (Rank r = 0; r < p; ++r) {
          const auto y = static_cast<Rank>((r + k) % p);
          b.add(step, r, y, {y}, false, {static_cast<std::uint32_t>((y + k) % p)});
        }
      }
      std::vector<Permutation> perms(p, Permutation(p));
      for (Rank y = 0; y < p; ++y) {
        perms[y][y] = y;
        for (std::uint64_t k = 1; k < p; ++k) {
          perms[y][(y + k) % p] = static_cast<std::uint32_t>((y + p - k) % p);
        }
      }
      b.schedule().final_permutation = std::move(perms);
      return b.finish();
    }
    case AlltoallVariant::Linear: {
      ScheduleBuilder b(Collective::Alltoall, "linear", p, 0, n, true);
      b.schedule().single_ported = false;
      return route(b, 1, [](std::size_t, Rank, Piece piece) { return piece.dst; });
    }
  }
  throw UnsupportedConfiguration("unknown alltoall variant");
}

}  // namespace bine
