// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bine/schedule.hpp"
#include "bine/topology.hpp"

namespace bine {

struct StepTraffic {
  std::uint64_t total_bytes = 0;
  std::uint64_t global_bytes = 0;
};

/// A transfer is global when its endpoints sit in different groups.
struct TrafficReport {
  Collective collective = Collective::Broadcast;
  std::string algorithm;
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  std::uint64_t total_bytes = 0;
  std::uint64_t global_bytes = 0;
  std::vector<StepTraffic> per_step;
  /// Modulo distance -> number of transfers.
  std::map<std::uint64_t, std::uint64_t> distance_histogram;

  std::string to_json() const;
};

/// Throws DomainError if the map does not cover exactly the schedule's ranks.
TrafficReport account(const CommSchedule& schedule, const GroupMap& groups);

/// Per step: modulo distance -> number of transfers.
using DistanceProfile = std::vector<std::map<std::uint64_t, std::uint64_t>>;
DistanceProfile distance_profile(const CommSchedule& schedule);

struct ReductionStat {
  std::string baseline;
  std::string candidate;
  std::uint64_t baseline_global = 0;
  std::uint64_t candidate_global = 0;
  /// 1 - candidate/baseline; empty when the baseline has no global traffic.
  std::optional<double> reduction;

  bool comparable() const noexcept { return reduction.has_value(); }
};

/// Both schedules must implement the same collective over the same p and n.
ReductionStat compare(const CommSchedule& baseline, const CommSchedule& candidate,
                      const GroupMap& groups);

struct VariantPair {
  Collective collective = Collective::Allreduce;
  std::string baseline;
  std::string candidate;
};

/// Binomial or butterfly baselines matched with the Bine variant that shares
/// their step structure: broadcast small, allreduce small and allreduce large.
const std::vector<VariantPair>& reference_pairs();

struct SweepOptions {
  /// Vector bytes; raised to p for block algorithms when smaller.
  std::uint64_t n = 1 << 20;
  /// Keep the first 2^floor(log2 size) ranks of jobs whose size is not a
  /// power of two instead of skipping them.
  bool truncate_to_power_of_two = false;
  unsigned jobs = 1;
};

struct JobReduction {
  std::string job;
  std::uint64_t p = 0;
  std::uint32_t groups = 0;
  ReductionStat stat;
};

struct SweepSummary {
  std::size_t jobs = 0;
  std::size_t comparable = 0;
  /// Set only when at least one job is comparable.
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
  /// Percentile (0..100) -> value, linear interpolation between order statistics.
  std::map<int, double> percentiles;
};

struct SweepResult {
  VariantPair pair;
  std::vector<JobReduction> rows;
  SweepSummary summary;
  std::vector<std::string> warnings;
};

SweepSummary summarize(const std::vector<double>& reductions, std::size_t jobs);

/// One ReductionStat per record, in input order. Throws DomainError on an
/// empty record set.
SweepResult allocation_sweep(const std::vector<AllocationRecord>& records, const VariantPair& pair,
                             const SweepOptions& options = {});

/// `step,src,dst,bytes,global`
void write_transfer_csv(std::ostream& out, const CommSchedule& schedule, const GroupMap& groups);
/// `job,p,groups,baseline_global,bine_global,reduction`; reduction is empty when
/// incomparable.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace bine
