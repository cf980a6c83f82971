// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

// Rooted collectives built on trees: broadcast, reduce, gather and scatter.

#include <stdexcept>

#include "bine/trees.hpp"
#include "builder_support.hpp"

namespace bine {

using detail::BlockList;
using detail::ScheduleBuilder;

namespace {

Rank to_virtual(Rank r, Rank root, std::uint64_t p) {
  return static_cast<Rank>((r + p - root) % p);
}

/// Sum of 2^j over the even (odd) positions j < bits.
std::int64_t position_sum(unsigned bits, unsigned parity) {
  std::int64_t sum = 0;
  for (unsigned j = parity; j < bits; j += 2) sum += std::int64_t{1} << j;
  return sum;
}

/// Range of blocks (virtual ranks) a rank holds right after joining a Bine tree
/// with `bits` = s - 1 - join step remaining levels below it.
BlockRange bine_subtree_range(Rank v, unsigned bits, std::uint64_t p) {
  const auto m = static_cast<std::uint32_t>(p);
  const auto x = static_cast<std::int64_t>(v);
  if (v % 2 == 0) return BlockRange(x - position_sum(bits, 1), x + position_sum(bits, 0), m);
  return BlockRange(x - position_sum(bits, 0), x + position_sum(bits, 1), m);
}

BlockList actual_blocks(const BlockRange& range, Rank root, std::uint64_t p) {
  BlockList out = range.blocks();
  for (auto& k : out) k = detail::to_actual(k, root, p);
  return out;
}

void append_tree_bcast(ScheduleBuilder& builder, TreeKind kind, Rank root) {
  const CommTree tree = build_tree(kind, builder.p(), root);
  for (unsigned i = 0; i < tree.steps(); ++i) builder.open_step();
  for (const TreeEdge& e : tree.edges()) builder.add_whole(e.step, e.parent, e.child, false);
}

void append_tree_reduce(ScheduleBuilder& builder, TreeKind kind, Rank root) {
  const CommTree tree = build_tree(kind, builder.p(), root);
  const unsigned s = tree.steps();
  for (unsigned i = 0; i < s; ++i) builder.open_step();
  for (const TreeEdge& e : tree.edges()) builder.add_whole(s - 1 - e.step, e.child, e.parent, true);
}

/// Scatter along a tree: the parent sends the blocks of the child's subtree.
/// `label[v]` is the block destined to virtual rank v. Returns the blocks every
/// virtual rank holds afterwards.
std::vector<BlockList> append_subtree_scatter(ScheduleBuilder& builder, TreeKind kind, Rank root,
                                              const std::vector<std::uint32_t>& label) {
  const std::uint64_t p = builder.p();
  const CommTree tree = build_tree(kind, p, root);
  const std::size_t first = builder.next_step();
  for (unsigned i = 0; i < tree.steps(); ++i) builder.open_step();
  std::vector<BlockList> held(p);
  held[0] = label;
  std::sort(held[0].begin(), held[0].end());
  for (const TreeEdge& e : tree.edges()) {
    BlockList blocks;
    for (Rank member : subtree_members(e.child, kind, p, root)) {
      blocks.push_back(label[to_virtual(member, root, p)]);
    }
    std::sort(blocks.begin(), blocks.end());
    held[to_virtual(e.child, root, p)] = blocks;
    builder.add(first + e.step, e.parent, e.child, std::move(blocks), false);
  }
  return held;
}

/// Gather along a distance-halving tree (steps in reverse). Each sender ships
/// its whole current range; Bine receivers extend alternately at either end.
void append_range_gather(ScheduleBuilder& builder, TreeKind kind, Rank root) {
  const std::uint64_t p = builder.p();
  const auto m = static_cast<std::uint32_t>(p);
  const CommTree tree = build_tree(kind, p, root);
  const unsigned s = tree.steps();
  std::vector<BlockRange> range;
  range.reserve(p);
  for (Rank v = 0; v < p; ++v) range.emplace_back(v, v, m);
  for (unsigned g = 0; g < s; ++g) {
    const std::size_t step = builder.open_step();
    const Step tree_step = s - 1 - g;
    for (const TreeEdge& e : tree.edges()) {
      if (e.step != tree_step) continue;
      const Rank child = to_virtual(e.child, root, p);
      const Rank parent = to_virtual(e.parent, root, p);
      const BlockRange& incoming = range[child];
      const BlockRange& mine = range[parent];
      const std::int64_t k = incoming.size();
      const bool extend_up = kind == TreeKind::BinomialHalving || ((parent % 2 == 0) == (g % 2 == 0));
      const BlockRange expected =
          extend_up ? BlockRange(std::int64_t{mine.last()} + 1, std::int64_t{mine.last()} + k, m)
                    : BlockRange(std::int64_t{mine.first()} - k, std::int64_t{mine.first()} - 1, m);
      if (!(expected == incoming)) {
        throw std::logic_error("gather range mismatch at rank " + std::to_string(e.parent));
      }
      builder.add(step, e.child, e.parent, actual_blocks(incoming, root, p), false);
      range[parent] = extend_up ? BlockRange(mine.first(), incoming.last(), m)
                                : BlockRange(incoming.first(), mine.last(), m);
    }
  }
}

void append_range_scatter(ScheduleBuilder& builder, TreeKind kind, Rank root) {
  const std::uint64_t p = builder.p();
  const auto m = static_cast<std::uint32_t>(p);
  const CommTree tree = build_tree(kind, p, root);
  const unsigned s = tree.steps();
  std::vector<BlockRange> range(p, BlockRange(0, 0, m));
  range[0] = kind == TreeKind::BineHalving ? bine_subtree_range(0, s, p)
                                           : BlockRange(0, std::int64_t(p) - 1, m);
  for (unsigned i = 0; i < s; ++i) {
    const std::size_t step = builder.open_step();
    for (const TreeEdge& e : tree.edges()) {
      if (e.step != i) continue;
      const Rank child = to_virtual(e.child, root, p);
      const Rank parent = to_virtual(e.parent, root, p);
      const BlockRange mine = range[parent];
      const std::int64_t half = mine.size() / 2;
      const std::int64_t a = mine.first();
      const std::int64_t b = a + mine.size() - 1;
      const bool send_top = kind == TreeKind::BinomialHalving ||
                            ((parent % 2 == 0) == ((s - 1 - i) % 2 == 0));
      const BlockRange outgoing = send_top ? BlockRange(b - half + 1, b, m)
                                           : BlockRange(a, a + half - 1, m);
      const BlockRange expected = kind == TreeKind::BineHalving
                                      ? bine_subtree_range(child, s - 1 - i, p)
                                      : BlockRange(child, std::int64_t{child} + half - 1, m);
      if (!(expected == outgoing)) {
        throw std::logic_error("scatter range mismatch at rank " + std::to_string(e.child));
      }
      builder.add(step, e.parent, e.child, actual_blocks(outgoing, root, p), false);
      range[child] = outgoing;
      range[parent] = send_top ? BlockRange(a, b - half, m) : BlockRange(a + half, b, m);
    }
  }
}

}  // namespace

CommSchedule build_bcast(std::uint64_t p, Rank root, std::uint64_t n, BcastVariant variant) {
  detail::check_ranks(p);
  detail::check_root(root, p);
  const unsigned s = step_count(p);
  switch (variant) {
    case BcastVariant::BineSmall: {
      ScheduleBuilder b(Collective::Broadcast, "bine_small", p, root, n, false);
      append_tree_bcast(b, TreeKind::BineHalving, root);
      return b.finish();
    }
    case BcastVariant::BinomialDoubling: {
      ScheduleBuilder b(Collective::Broadcast, "binomial_doubling", p, root, n, false);
      append_tree_bcast(b, TreeKind::BinomialDoubling, root);
      return b.finish();
    }
    case BcastVariant::BinomialHalving: {
      ScheduleBuilder b(Collective::Broadcast, "binomial_halving", p, root, n, false);
      append_tree_bcast(b, TreeKind::BinomialHalving, root);
      return b.finish();
    }
    case BcastVariant::BineLarge: {
      // Distance-doubling scatter, then distance-halving allgather. Virtual rank
      // v is handed block reverse(nu(v)) so both phases move contiguous ranges.
      ScheduleBuilder b(Collective::Broadcast, "bine_large", p, root, n, true);
      const auto table = NuTable::get(p);
      std::vector<std::uint32_t> label(p);
      for (Rank v = 0; v < p; ++v) {
        label[v] = static_cast<std::uint32_t>(reverse_bits(table->nu_of(v), s));
      }
      std::vector<BlockList> held = append_subtree_scatter(b, TreeKind::BineDoubling, root, label);
      detail::append_butterfly_allgather(b, ButterflyKind::BineHalving, held, root);
      return b.finish();
    }
    case BcastVariant::BinomialSag: {
      ScheduleBuilder b(Collective::Broadcast, "binomial_sag", p, root, n, true);
      std::vector<std::uint32_t> label(p);
      for (Rank v = 0; v < p; ++v) label[v] = v;
      std::vector<BlockList> held =
          append_subtree_scatter(b, TreeKind::BinomialHalving, root, label);
      detail::append_butterfly_allgather(b, ButterflyKind::RecursiveDoubling, held, root);
      return b.finish();
    }
  }
  throw UnsupportedConfiguration("unknown broadcast variant");
}

CommSchedule build_reduce(std::uint64_t p, Rank root, std::uint64_t n, ReduceVariant variant) {
  detail::check_ranks(p);
  detail::check_root(root, p);
  const unsigned s = step_count(p);
  switch (variant) {
    case ReduceVariant::BineSmall: {
      ScheduleBuilder b(Collective::Reduce, "bine_small", p, root, n, false);
      append_tree_reduce(b, TreeKind::BineHalving, root);
      return b.finish();
    }
    case ReduceVariant::Binomial: {
      ScheduleBuilder b(Collective::Reduce, "binomial", p, root, n, false);
      append_tree_reduce(b, TreeKind::BinomialHalving, root);
      return b.finish();
    }
    case ReduceVariant::BineLarge: {
      // Distance-doubling reduce-scatter with the contiguous layout, then a
      // distance-halving gather of the reduced blocks.
      ScheduleBuilder b(Collective::Reduce, "bine_large", p, root, n, true);
      const std::vector<Rank> owner = detail::contiguous_owner(p);
      detail::append_butterfly_reduce_scatter(b, ButterflyReach(ButterflyKind::BineDoubling, p),
                                              owner, root);
      std::vector<BlockList> held(p);
      for (std::uint32_t k = 0; k < p; ++k) held[owner[k]] = {k};
      const CommTree tree = build_tree(TreeKind::BineHalving, p, root);
      const std::size_t first = b.next_step();
      for (unsigned i = 0; i < s; ++i) b.open_step();
      for (unsigned g = 0; g < s; ++g) {
        for (const TreeEdge& e : tree.edges()) {
          if (e.step != s - 1 - g) continue;
          const Rank child = to_virtual(e.child, root, p);
          const Rank parent = to_virtual(e.parent, root, p);
          b.add(first + g, e.child, e.parent, held[child], false);
          BlockList merged;
          std::merge(held[parent].begin(), held[parent].end(), held[child].begin(),
                     held[child].end(), std::back_inserter(merged));
          held[parent] = std::move(merged);
        }
      }
      return b.finish();
    }
  }
  throw UnsupportedConfiguration("unknown reduce variant");
}

CommSchedule build_gather(std::uint64_t p, Rank root, std::uint64_t n, GatherVariant variant) {
  detail::check_ranks(p);
  detail::check_root(root, p);
  step_count(p);
  const bool bine = variant == GatherVariant::Bine;
  ScheduleBuilder b(Collective::Gather, bine ? "bine" : "binomial", p, root, n, true);
  append_range_gather(b, bine ? TreeKind::BineHalving : TreeKind::BinomialHalving, root);
  return b.finish();
}

CommSchedule build_scatter(std::uint64_t p, Rank root, std::uint64_t n, ScatterVariant variant) {
  detail::check_ranks(p);
  detail::check_root(root, p);
  step_count(p);
  const bool bine = variant == ScatterVariant::Bine;
  ScheduleBuilder b(Collective::Scatter, bine ? "bine" : "binomial", p, root, n, true);
  append_range_scatter(b, bine ? TreeKind::BineHalving : TreeKind::BinomialHalving, root);
  return b.finish();
}

}  // namespace bine
