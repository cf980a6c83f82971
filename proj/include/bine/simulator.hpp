// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bine/schedule.hpp"

namespace bine {

/// Symbolic block value: which block it is and which ranks' inputs it sums.
/// For alltoall the block id is src * p + dst.
struct ValueTag {
  std::uint32_t block = 0;
  std::vector<Rank> contributors;  // sorted, no duplicates

  friend bool operator==(const ValueTag&, const ValueTag&) = default;
};

std::string to_string(const ValueTag& tag);

/// Buffer of one rank: num_blocks * segments slots, slot = block * segments + segment.
struct RankState {
  Rank rank = 0;
  std::vector<std::optional<ValueTag>> slots;

  friend bool operator==(const RankState&, const RankState&) = default;
};

/// Each block is split into `segments` independently tagged slots, so the tag
/// of segment g of block b carries the block id b * segments + g.
struct SimulationOptions {
  unsigned segments = 1;
  /// Reject steps where a rank sends or receives more than one message.
  /// Defaults to the schedule's own single_ported flag.
  std::optional<bool> single_port;
};

/// Input buffers the collective starts from (before initial_permutation).
std::vector<RankState> initial_state(const CommSchedule& schedule,
                                     const SimulationOptions& options = {});

/// Runs the schedule in synchronous rounds and applies the final permutation.
/// Throws ScheduleDefect on reads of empty slots, reductions into empty or
/// mismatched slots, double-counted contributions, conflicting writes and
/// port violations.
std::vector<RankState> execute(const CommSchedule& schedule, const std::vector<RankState>& initial,
                               const SimulationOptions& options = {});

/// Definitional result. Slots whose content the collective leaves unspecified
/// (non-root ranks of reduce and gather, foreign blocks of scatter and
/// reduce-scatter) are nullopt. `owned` gives the block each rank owns after a
/// reduce-scatter; empty means block j at rank j.
std::vector<RankState> oracle(Collective collective, std::uint64_t p, Rank root,
                              std::uint32_t num_blocks, unsigned segments = 1,
                              const std::vector<std::uint32_t>& owned = {});

struct Divergence {
  Rank rank = 0;
  std::uint32_t slot = 0;
  std::string expected;
  std::string actual;
};

struct VerifyReport {
  Collective collective = Collective::Broadcast;
  std::string algorithm;
  std::uint64_t p = 0;
  Rank root = 0;
  unsigned segments = 1;
  bool passed = false;
  std::optional<Divergence> divergence;
  /// Set when execution stopped on a ScheduleDefect.
  std::optional<std::string> defect;

  std::string to_json() const;
};

/// Executes the schedule and compares every specified slot with the oracle.
/// Never throws for a defective schedule; the failure is reported.
VerifyReport verify(const CommSchedule& schedule, const SimulationOptions& options = {});

/// Same check with 32-bit integer vectors and wrapping elementwise sums.
/// Inputs are pseudo-random values derived from `seed`.
struct NumericReport {
  bool passed = false;
  std::string message;
};
NumericReport verify_numeric(const CommSchedule& schedule, unsigned elements_per_block = 4,
                             std::uint64_t seed = 1);

enum class MutationKind { Remove, Retarget };

struct Mutation {
  MutationKind kind = MutationKind::Remove;
  std::size_t step = 0;
  std::size_t transfer = 0;
  Rank new_dst = 0;
};

/// Random single-transfer mutation (the schedule must have at least one transfer
/// and p >= 3 for retargeting).
Mutation random_mutation(const CommSchedule& schedule, std::mt19937_64& rng);
CommSchedule apply_mutation(const CommSchedule& schedule, const Mutation& mutation);

}  // namespace bine
