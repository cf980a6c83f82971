// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

// Root-free collectives built on butterflies and rings.

#include "bine/trees.hpp"
#include "builder_support.hpp"

namespace bine {

using detail::BlockList;
using detail::ScheduleBuilder;

namespace detail {

void append_butterfly_reduce_scatter(ScheduleBuilder& builder, const ButterflyReach& reach,
                                     const std::vector<Rank>& owner, Rank root) {
  const std::uint64_t p = builder.p();
  std::vector<BlockList> responsible(p, BlockList(owner.size()));
  for (auto& blocks : responsible) {
    for (std::uint32_t k = 0; k < blocks.size(); ++k) blocks[k] = k;
  }
  for (Step i = 0; i < reach.steps(); ++i) {
    const std::size_t step = builder.open_step();
    std::vector<BlockList> kept(p);
    for (Rank v = 0; v < p; ++v) {
      const Rank partner = reach.partner(v, i);
      BlockList outgoing;
      for (std::uint32_t k : responsible[v]) {
        (reach.reaches(i + 1, partner, owner[k]) ? outgoing : kept[v]).push_back(k);
      }
      builder.add(step, to_actual(v, root, p), to_actual(partner, root, p), std::move(outgoing),
                  true);
    }
    responsible = std::move(kept);
  }
}

void append_butterfly_allgather(ScheduleBuilder& builder, ButterflyKind kind,
                                std::vector<BlockList>& held, Rank root) {
  const std::uint64_t p = builder.p();
  const unsigned s = step_count(p);
  for (Step i = 0; i < s; ++i) {
    const std::size_t step = builder.open_step();
    std::vector<BlockList> next(p);
    for (Rank v = 0; v < p; ++v) {
      const Rank partner = butterfly_partner(kind, v, i, p);
      BlockList missing;
      std::set_difference(held[v].begin(), held[v].end(), held[partner].begin(),
                          held[partner].end(), std::back_inserter(missing));
      builder.add(step, to_actual(v, root, p), to_actual(partner, root, p), std::move(missing),
                  false);
      std::set_union(held[v].begin(), held[v].end(), held[partner].begin(), held[partner].end(),
                     std::back_inserter(next[v]));
    }
    held = std::move(next);
  }
}

std::vector<Rank> contiguous_owner(std::uint64_t p) {
  const unsigned s = step_count(p);
  const auto table = NuTable::get(p);
  std::vector<Rank> owner(p);
  for (Rank v = 0; v < p; ++v) owner[reverse_bits(table->nu_of(v), s)] = v;
  return owner;
}

void append_ring_reduce_scatter(ScheduleBuilder& builder) {
  const std::uint64_t p = builder.p();
  for (std::uint64_t k = 0; k + 1 < p; ++k) {
    const std::size_t step = builder.open_step();
    for (Rank r = 0; r < p; ++r) {
      const auto block = static_cast<std::uint32_t>((r + 2 * p - k - 1) % p);
      builder.add(step, r, static_cast<Rank>((r + 1) % p), {block}, true);
    }
  }
}

void append_ring_allgather(ScheduleBuilder& builder) {
  const std::uint64_t p = builder.p();
  for (std::uint64_t k = 0; k + 1 < p; ++k) {
    const std::size_t step = builder.open_step();
    for (Rank r = 0; r < p; ++r) {
      const auto block = static_cast<std::uint32_t>((r + p - k) % p);
      builder.add(step, r, static_cast<Rank>((r + 1) % p), {block}, false);
    }
  }
}

}  // namespace detail

namespace {

std::vector<Rank> identity_owner(std::uint64_t p) {
  std::vector<Rank> owner(p);
  for (Rank v = 0; v < p; ++v) owner[v] = v;
  return owner;
}

std::vector<Rank> bit_reversed_owner(std::uint64_t p) {
  const unsigned s = step_count(p);
  std::vector<Rank> owner(p);
  for (Rank v = 0; v < p; ++v) owner[reverse_bits(v, s)] = v;
  return owner;
}

std::vector<BlockList> held_from_owner(const std::vector<Rank>& owner) {
  std::vector<BlockList> held(owner.size());
  for (std::uint32_t k = 0; k < owner.size(); ++k) held[owner[k]] = {k};
  return held;
}

void append_whole_vector_butterfly(ScheduleBuilder& builder, ButterflyKind kind) {
  const std::uint64_t p = builder.p();
  const unsigned s = step_count(p);
  for (Step i = 0; i < s; ++i) {
    const std::size_t step = builder.open_step();
    for (Rank r = 0; r < p; ++r) builder.add_whole(step, r, butterfly_partner(kind, r, i, p), true);
  }
}

/// Allgather where rank r ships everything it holds to r + shift(i) each step.
template <typename Shift>
void append_shift_allgather(ScheduleBuilder& builder, unsigned steps, Shift shift) {
  const std::uint64_t p = builder.p();
  std::vector<BlockList> held(p);
  for (Rank r = 0; r < p; ++r) held[r] = {r};
  for (unsigned i = 0; i < steps; ++i) {
    const std::size_t step = builder.open_step();
    const std::uint64_t offset = shift(i) % p;
    std::vector<BlockList> next(p);
    for (Rank r = 0; r < p; ++r) {
      const auto dst = static_cast<Rank>((r + offset) % p);
      const auto from = static_cast<Rank>((r + p - offset) % p);
      builder.add(step, r, dst, held[r], false);
      std::merge(held[r].begin(), held[r].end(), held[from].begin(), held[from].end(),
                 std::back_inserter(next[r]));
    }
    held = std::move(next);
  }
}

}  // namespace

CommSchedule build_reduce_scatter(std::uint64_t p, std::uint64_t n, ReduceScatterVariant variant,
                                  Contiguity contiguity) {
  detail::check_ranks(p);
  if (variant != ReduceScatterVariant::Bine && contiguity != Contiguity::Noncontig) {
    throw UnsupportedConfiguration("contiguity options apply to the bine reduce-scatter only");
  }
  switch (variant) {
    case ReduceScatterVariant::Bine: {
      const unsigned s = step_count(p);
      std::string name = "bine";
      if (contiguity != Contiguity::Noncontig) name += "_" + std::string(to_string(contiguity));
      ScheduleBuilder b(Collective::ReduceScatter, name, p, 0, n, true);
      const ButterflyReach reach(ButterflyKind::BineDoubling, p);
      if (contiguity == Contiguity::Noncontig) {
        detail::append_butterfly_reduce_scatter(b, reach, identity_owner(p), 0);
        return b.finish();
      }
      const std::vector<Rank> owner = detail::contiguous_owner(p);
      detail::append_butterfly_reduce_scatter(b, reach, owner, 0);
      CommSchedule& schedule = b.schedule();
      if (contiguity == Contiguity::PrePermute) {
        const auto table = NuTable::get(p);
        Permutation forward(p);
        Permutation backward(p);
        for (Rank r = 0; r < p; ++r) {
          forward[r] = static_cast<std::uint32_t>(reverse_bits(table->nu_of(r), s));
          backward[forward[r]] = r;
        }
        schedule.initial_permutation = {forward};
        schedule.final_permutation = {backward};
      } else {
        schedule.result_blocks.resize(p);
        for (std::uint32_t k = 0; k < p; ++k) schedule.result_blocks[owner[k]] = k;
      }
      return b.finish();
    }
    case ReduceScatterVariant::RecursiveHalving: {
      ScheduleBuilder b(Collective::ReduceScatter, "recursive_halving", p, 0, n, true);
      detail::append_butterfly_reduce_scatter(
          b, ButterflyReach(ButterflyKind::RecursiveHalving, p), identity_owner(p), 0);
      return b.finish();
    }
    case ReduceScatterVariant::Ring: {
      ScheduleBuilder b(Collective::ReduceScatter, "ring", p, 0, n, true);
      detail::append_ring_reduce_scatter(b);
      return b.finish();
    }
  }
  throw UnsupportedConfiguration("unknown reduce-scatter variant");
}

CommSchedule build_allgather(std::uint64_t p, std::uint64_t n, AllgatherVariant variant) {
  detail::check_ranks(p);
  switch (variant) {
    case AllgatherVariant::Bine: {
      ScheduleBuilder b(Collective::Allgather, "bine", p, 0, n, true);
      std::vector<BlockList> held = held_from_owner(identity_owner(p));
      detail::append_butterfly_allgather(b, ButterflyKind::BineHalving, held, 0);
      return b.finish();
    }
    case AllgatherVariant::RecursiveDoubling: {
      ScheduleBuilder b(Collective::Allgather, "recursive_doubling", p, 0, n, true);
      std::vector<BlockList> held = held_from_owner(identity_owner(p));
      detail::append_butterfly_allgather(b, ButterflyKind::RecursiveDoubling, held, 0);
      return b.finish();
    }
    case AllgatherVariant::Ring: {
      ScheduleBuilder b(Collective::Allgather, "ring", p, 0, n, true);
      detail::append_ring_allgather(b);
      return b.finish();
    }
    case AllgatherVariant::Bruck: {
      const unsigned s = step_count(p);
      ScheduleBuilder b(Collective::Allgather, "bruck", p, 0, n, true);
      // Send to r - 2^i, receive from r + 2^i.
      append_shift_allgather(b, s, [p](unsigned i) { return p - (1ULL << i); });
      return b.finish();
    }
    case AllgatherVariant::SparbitLike: {
      const unsigned s = step_count(p);
      ScheduleBuilder b(Collective::Allgather, "sparbit_like", p, 0, n, true);
      append_shift_allgather(b, s, [p](unsigned i) { return p >> (i + 1); });
      return b.finish();
    }
  }
  throw UnsupportedConfiguration("unknown allgather variant");
}

CommSchedule build_allreduce(std::uint64_t p, std::uint64_t n, AllreduceVariant variant) {
  detail::check_ranks(p);
  switch (variant) {
    case AllreduceVariant::BineSmall: {
      step_count(p);
      ScheduleBuilder b(Collective::Allreduce, "bine_small", p, 0, n, false);
      append_whole_vector_butterfly(b, ButterflyKind::BineHalving);
      return b.finish();
    }
    case AllreduceVariant::RecursiveDoubling: {
      step_count(p);
      ScheduleBuilder b(Collective::Allreduce, "recursive_doubling", p, 0, n, false);
      append_whole_vector_butterfly(b, ButterflyKind::RecursiveDoubling);
      return b.finish();
    }
    case AllreduceVariant::BineLarge: {
      // Reduce-scatter on the distance-doubling butterfly without reordering,
      // then the mirrored allgather, which lands every block in place.
      ScheduleBuilder b(Collective::Allreduce, "bine_large", p, 0, n, true);
      const std::vector<Rank> owner = detail::contiguous_owner(p);
      detail::append_butterfly_reduce_scatter(b, ButterflyReach(ButterflyKind::BineDoubling, p),
                                              owner, 0);
      std::vector<BlockList> held = held_from_owner(owner);
      detail::append_butterfly_allgather(b, ButterflyKind::BineHalving, held, 0);
      return b.finish();
    }
    case AllreduceVariant::RabenseifnerLike: {
      // Vector-halving distance-doubling reduce-scatter (block reverse(v) ends
      // at rank v), then vector-doubling distance-halving allgather.
      ScheduleBuilder b(Collective::Allreduce, "rabenseifner_like", p, 0, n, true);
      const std::vector<Rank> owner = bit_reversed_owner(p);
      detail::append_butterfly_reduce_scatter(
          b, ButterflyReach(ButterflyKind::RecursiveDoubling, p), owner, 0);
      std::vector<BlockList> held = held_from_owner(owner);
      detail::append_butterfly_allgather(b, ButterflyKind::RecursiveHalving, held, 0);
      return b.finish();
    }
    case AllreduceVariant::Ring: {
      ScheduleBuilder b(Collective::Allreduce, "ring", p, 0, n, true);
      detail::append_ring_reduce_scatter(b);
      detail::append_ring_allgather(b);
      return b.finish();
    }
  }
  throw UnsupportedConfiguration("unknown allreduce variant");
}

}  // namespace bine
