// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bine/schedule.hpp"

namespace bine {

enum class BcastVariant { BineSmall, BineLarge, BinomialDoubling, BinomialHalving, BinomialSag };
enum class ReduceVariant { BineSmall, BineLarge, Binomial };
enum class GatherVariant { Bine, Binomial };
enum class ScatterVariant { Bine, Binomial };
enum class ReduceScatterVariant { Bine, RecursiveHalving, Ring };
enum class AllgatherVariant { Bine, RecursiveDoubling, Ring, Bruck, SparbitLike };
enum class AllreduceVariant { BineSmall, BineLarge, RecursiveDoubling, Ring, RabenseifnerLike };
enum class AlltoallVariant { Bine, Bruck, Pairwise, Linear };

/// Block layout used by the Bine reduce-scatter.
///  - Noncontig: blocks stay in natural order; sends may be non-contiguous.
///  - PrePermute: block r is moved to position reverse(nu(r)) first, so every
///    send is a contiguous range; the inverse permutation is applied at the end.
///  - UnpermutedOutput: sends the contiguous ranges without moving data; rank j
///    ends up owning block reverse(nu(j)), recorded in result_blocks.
enum class Contiguity { Noncontig, PrePermute, UnpermutedOutput };

std::string_view to_string(Contiguity c) noexcept;
Contiguity parse_contiguity(std::string_view name);

/// Vector bytes n go to whole-vector algorithms as one block of n bytes; block
/// algorithms split n into p blocks of ceil(n / p) bytes and need n >= p.
CommSchedule build_bcast(std::uint64_t p, Rank root, std::uint64_t n, BcastVariant variant);
CommSchedule build_reduce(std::uint64_t p, Rank root, std::uint64_t n, ReduceVariant variant);
CommSchedule build_gather(std::uint64_t p, Rank root, std::uint64_t n, GatherVariant variant);
CommSchedule build_scatter(std::uint64_t p, Rank root, std::uint64_t n, ScatterVariant variant);
CommSchedule build_reduce_scatter(std::uint64_t p, std::uint64_t n, ReduceScatterVariant variant,
                                  Contiguity contiguity = Contiguity::Noncontig);
CommSchedule build_allgather(std::uint64_t p, std::uint64_t n, AllgatherVariant variant);
CommSchedule build_allreduce(std::uint64_t p, std::uint64_t n, AllreduceVariant variant);
/// n is the per-rank send buffer; block (i -> j) is n / p bytes.
CommSchedule build_alltoall(std::uint64_t p, std::uint64_t n, AlltoallVariant variant);

/// String-keyed entry point used by the command line and the sweeps.
struct ScheduleRequest {
  Collective collective = Collective::Broadcast;
  std::string variant;
  std::uint64_t p = 0;
  Rank root = 0;
  std::uint64_t n = 0;
  Contiguity contiguity = Contiguity::Noncontig;
};

CommSchedule build_schedule(const ScheduleRequest& request);

/// Variant names accepted by build_schedule for a collective.
const std::vector<std::string_view>& variant_names(Collective c);

/// True if the variant only supports power-of-two rank counts.
bool requires_power_of_two(Collective c, std::string_view variant);

}  // namespace bine
