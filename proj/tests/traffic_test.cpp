// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/traffic.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "bine/builders.hpp"
#include "bine/errors.hpp"
#include "bine/trees.hpp"

namespace bine {
namespace {

struct Hop {
  Rank src;
  Rank dst;
};

// Global bytes of a whole-vector tree given as an explicit edge list.
std::uint64_t tree_global(const std::vector<Hop>& hops, const std::vector<std::uint32_t>& group,
                          std::uint64_t n) {
  std::uint64_t total = 0;
  for (const Hop& h : hops) total += group[h.src] != group[h.dst] ? n : 0;
  return total;
}

// Bine broadcast tree over 8 ranks, written out by hand.
const std::vector<Hop> kBineTree8{{0, 3}, {0, 7}, {3, 4}, {0, 1}, {3, 2}, {7, 6}, {4, 5}};
const std::vector<Hop> kHalvingTree8{{0, 4}, {0, 2}, {4, 6}, {0, 1}, {2, 3}, {4, 5}, {6, 7}};

TEST(Traffic, MotivatingExample) {
  const std::uint64_t n = 64;
  const GroupMap groups = block_groups(8, 2);
  EXPECT_EQ(account(build_bcast(8, 0, n, BcastVariant::BinomialDoubling), groups).global_bytes, 6 * n);
  EXPECT_EQ(account(build_bcast(8, 0, n, BcastVariant::BinomialHalving), groups).global_bytes, 3 * n);
}

TEST(Traffic, SingleGroupHasNoGlobalTraffic) {
  const GroupMap one = block_groups(16, 16);
  for (Collective c : all_collectives()) {
    for (std::string_view v : variant_names(c)) {
      EXPECT_EQ(account(build_schedule({c, std::string(v), 16, 0, 256}), one).global_bytes, 0U);
    }
  }
}

TEST(Traffic, BineBroadcastAgainstHalvingBinomial) {
  const std::uint64_t n = 64;
  const GroupMap groups = block_groups(8, 2);
  const std::uint64_t bine = tree_global(kBineTree8, groups.groups(), n);
  const std::uint64_t halving = tree_global(kHalvingTree8, groups.groups(), n);
  const ReductionStat stat = compare(build_bcast(8, 0, n, BcastVariant::BinomialHalving),
                                     build_bcast(8, 0, n, BcastVariant::BineSmall), groups);
  EXPECT_EQ(stat.baseline_global, halving);
  EXPECT_EQ(stat.candidate_global, bine);
  ASSERT_TRUE(stat.comparable());
  EXPECT_DOUBLE_EQ(*stat.reduction, 1.0 - static_cast<double>(bine) / static_cast<double>(halving));
}

TEST(Traffic, AdversarialAllocationIsNegative) {
  const std::uint64_t n = 64;
  const GroupMap alternating({0, 1, 0, 1, 0, 1, 0, 1});
  const ReductionStat stat = compare(build_bcast(8, 0, n, BcastVariant::BinomialHalving),
                                     build_bcast(8, 0, n, BcastVariant::BineSmall), alternating);
  EXPECT_EQ(stat.baseline_global, tree_global(kHalvingTree8, alternating.groups(), n));
  EXPECT_EQ(stat.candidate_global, tree_global(kBineTree8, alternating.groups(), n));
  ASSERT_TRUE(stat.comparable());
  EXPECT_LT(*stat.reduction, 0.0);
}

TEST(Traffic, IdenticalSchedulesAndIncomparable) {
  const CommSchedule s = build_allreduce(16, 1024, AllreduceVariant::BineLarge);
  const ReductionStat same = compare(s, s, block_groups(16, 4));
  ASSERT_TRUE(same.comparable());
  EXPECT_EQ(*same.reduction, 0.0);
  const ReductionStat none = compare(s, s, block_groups(16, 16));
  EXPECT_FALSE(none.comparable());
  EXPECT_THROW(compare(s, build_allreduce(16, 2048, AllreduceVariant::BineLarge), block_groups(16, 4)),
               DomainError);
  EXPECT_THROW(account(s, block_groups(8, 4)), DomainError);
}

TEST(Traffic, ReportInvariants) {
  const GroupMap groups = shifted_block_groups(64, 6, 5);
  for (Collective c : all_collectives()) {
    for (std::string_view v : variant_names(c)) {
      const CommSchedule s = build_schedule({c, std::string(v), 64, 7, 64 * 64});
      const TrafficReport r = account(s, groups);
      EXPECT_LE(r.global_bytes, r.total_bytes);
      EXPECT_EQ(r.total_bytes, s.total_bytes());
      std::uint64_t total = 0;
      std::uint64_t global = 0;
      for (const StepTraffic& st : r.per_step) {
        total += st.total_bytes;
        global += st.global_bytes;
      }
      EXPECT_EQ(total, r.total_bytes);
      EXPECT_EQ(global, r.global_bytes);
    }
  }
}

TEST(Traffic, DistanceProfiles) {
  const DistanceProfile bine = distance_profile(build_bcast(8, 0, 64, BcastVariant::BineSmall));
  ASSERT_EQ(bine.size(), 3U);
  for (unsigned i = 0; i < 3; ++i) {
    ASSERT_EQ(bine[i].size(), 1U);
    EXPECT_EQ(bine[i].begin()->first, bine_distance(i, 3));
  }
  EXPECT_EQ(bine[0].begin()->first, 3U);
  EXPECT_EQ(bine[1].begin()->first, 1U);
  EXPECT_EQ(bine[2].begin()->first, 1U);

  const DistanceProfile binomial = distance_profile(build_bcast(8, 0, 64, BcastVariant::BinomialHalving));
  EXPECT_EQ(binomial[0].begin()->first, 4U);
  EXPECT_EQ(binomial[1].begin()->first, 2U);
  EXPECT_EQ(binomial[2].begin()->first, 1U);

  for (const auto& step : distance_profile(build_allgather(16, 64, AllgatherVariant::Ring))) {
    ASSERT_EQ(step.size(), 1U);
    EXPECT_EQ(step.begin()->first, 1U);
  }
}

TEST(Traffic, ButterflyDistancesMatchBineDistance) {
  for (std::uint64_t p = 4; p <= 1024; p *= 2) {
    const unsigned s = step_count(p);
    const DistanceProfile small = distance_profile(build_allreduce(p, p, AllreduceVariant::BineSmall));
    const DistanceProfile large = distance_profile(build_allreduce(p, p, AllreduceVariant::BineLarge));
    for (unsigned i = 0; i < s; ++i) {
      ASSERT_EQ(small[i].size(), 1U);
      ASSERT_EQ(small[i].begin()->first, bine_distance(i, s));
      ASSERT_EQ(large[i].begin()->first, bine_distance(s - 1 - i, s));
      ASSERT_EQ(large[s + i].begin()->first, bine_distance(i, s));
    }
  }
}

TEST(Traffic, VolumeEqualityPerReferencePair) {
  for (std::uint64_t p = 2; p <= 1024; p *= 2) {
    for (const VariantPair& pair : reference_pairs()) {
      const GroupMap groups = block_groups(p, 3);
      const TrafficReport base = account(build_schedule({pair.collective, pair.baseline, p, 0, 4096}), groups);
      const TrafficReport cand = account(build_schedule({pair.collective, pair.candidate, p, 0, 4096}), groups);
      ASSERT_EQ(base.total_bytes, cand.total_bytes);
    }
  }
}

TEST(Sweep, SummaryStatistics) {
  const SweepSummary s = summarize({0.4, 0.1, 0.3, 0.2}, 5);
  EXPECT_EQ(s.jobs, 5U);
  EXPECT_EQ(s.comparable, 4U);
  EXPECT_DOUBLE_EQ(*s.mean, 0.25);
  EXPECT_DOUBLE_EQ(*s.min, 0.1);
  EXPECT_DOUBLE_EQ(*s.max, 0.4);
  EXPECT_DOUBLE_EQ(s.percentiles.at(50), 0.25);
  EXPECT_DOUBLE_EQ(s.percentiles.at(25), 0.175);
  EXPECT_DOUBLE_EQ(s.percentiles.at(100), 0.4);
  const SweepSummary empty = summarize({}, 3);
  EXPECT_FALSE(empty.mean.has_value());
  EXPECT_TRUE(empty.percentiles.empty());
}

TEST(Sweep, SingleGroupJobsAreIncomparable) {
  std::vector<AllocationRecord> records;
  for (int k = 0; k < 4; ++k) records.push_back(record_from_groups("j" + std::to_string(k), block_groups(16, 16)));
  const SweepResult result = allocation_sweep(records, reference_pairs()[1]);
  ASSERT_EQ(result.rows.size(), 4U);
  for (const auto& row : result.rows) EXPECT_FALSE(row.stat.comparable());
  EXPECT_EQ(result.summary.comparable, 0U);
  EXPECT_FALSE(result.summary.mean.has_value());
}

TEST(Sweep, KeepsInputOrderAcrossThreads) {
  const auto records = random_block_allocations({16, 64, 32, 128}, 6, 2, 40, 5);
  SweepOptions serial;
  SweepOptions parallel;
  parallel.jobs = 4;
  const SweepResult a = allocation_sweep(records, reference_pairs()[2], serial);
  const SweepResult b = allocation_sweep(records, reference_pairs()[2], parallel);
  ASSERT_EQ(a.rows.size(), records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    EXPECT_EQ(a.rows[k].job, records[k].job);
    EXPECT_EQ(b.rows[k].job, records[k].job);
    EXPECT_EQ(a.rows[k].stat.candidate_global, b.rows[k].stat.candidate_global);
    const ReductionStat direct =
        compare(build_schedule({Collective::Allreduce, "rabenseifner_like", records[k].size(), 0, serial.n}),
                build_schedule({Collective::Allreduce, "bine_large", records[k].size(), 0, serial.n}),
                records[k].group_map());
    EXPECT_EQ(a.rows[k].stat.baseline_global, direct.baseline_global);
    EXPECT_EQ(a.rows[k].stat.candidate_global, direct.candidate_global);
  }
}

TEST(Sweep, NonPowerOfTwoJobs) {
  const std::vector<AllocationRecord> records{record_from_groups("odd", block_groups(12, 3)),
                                              record_from_groups("even", block_groups(8, 2))};
  const SweepResult skipped = allocation_sweep(records, reference_pairs()[1]);
  ASSERT_EQ(skipped.rows.size(), 1U);
  EXPECT_EQ(skipped.rows[0].job, "even");
  ASSERT_EQ(skipped.warnings.size(), 1U);

  SweepOptions truncate;
  truncate.truncate_to_power_of_two = true;
  const SweepResult kept = allocation_sweep(records, reference_pairs()[1], truncate);
  ASSERT_EQ(kept.rows.size(), 2U);
  EXPECT_EQ(kept.rows[0].p, 8U);
  EXPECT_EQ(kept.rows[0].groups, 3U);
  EXPECT_THROW(allocation_sweep({}, reference_pairs()[1]), DomainError);
}

TEST(Traffic, CsvWriters) {
  std::ostringstream transfers;
  write_transfer_csv(transfers, build_bcast(4, 0, 10, BcastVariant::BinomialHalving), block_groups(4, 2));
  EXPECT_EQ(transfers.str(), "step,src,dst,bytes,global\n0,0,2,10,1\n1,0,1,10,0\n1,2,3,10,0\n");

  std::ostringstream sweep;
  const std::vector<AllocationRecord> records{record_from_groups("solo", block_groups(4, 4))};
  write_sweep_csv(sweep, allocation_sweep(records, reference_pairs()[1]));
  EXPECT_EQ(sweep.str(), "job,p,groups,baseline_global,bine_global,reduction\nsolo,4,1,0,0,\n");
}

TEST(Traffic, ReportJson) {
  const TrafficReport r = account(build_bcast(4, 0, 10, BcastVariant::BinomialHalving), block_groups(4, 2));
  const std::string text = r.to_json();
  EXPECT_NE(text.find("\"global_bytes\":10"), std::string::npos);
  EXPECT_NE(text.find("\"distance_histogram\":{\"1\":2,\"2\":1}"), std::string::npos);
}

}  // namespace
}  // namespace bine
