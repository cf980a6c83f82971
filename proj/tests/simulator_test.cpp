// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bine/builders.hpp"
#include "bine/errors.hpp"

namespace bine {
namespace {

std::vector<Rank> all_ranks(std::uint64_t p) {
  std::vector<Rank> out(p);
  for (Rank r = 0; r < p; ++r) out[r] = r;
  return out;
}

TEST(Simulator, TwoRankBroadcast) {
  const CommSchedule s = build_bcast(2, 0, 64, BcastVariant::BineSmall);
  const auto final = execute(s, initial_state(s));
  ASSERT_TRUE(final[1].slots[0].has_value());
  EXPECT_EQ(final[1].slots[0]->contributors, std::vector<Rank>{0});
  EXPECT_TRUE(verify(s).passed);
}

TEST(Simulator, BineLargeAllreduceContributions) {
  const CommSchedule s = build_allreduce(8, 64, AllreduceVariant::BineLarge);
  const auto final = execute(s, initial_state(s));
  for (const RankState& rank : final) {
    ASSERT_EQ(rank.slots.size(), 8U);
    for (std::uint32_t b = 0; b < 8; ++b) {
      ASSERT_TRUE(rank.slots[b].has_value());
      EXPECT_EQ(rank.slots[b]->block, b);
      EXPECT_EQ(rank.slots[b]->contributors, all_ranks(8));
    }
  }
}

TEST(Simulator, SendFromEmptySlotIsADefect) {
  CommSchedule s = build_bcast(4, 0, 64, BcastVariant::BinomialDoubling);
  std::swap(s.steps[0], s.steps[1]);
  EXPECT_THROW(execute(s, initial_state(s)), ScheduleDefect);
  const VerifyReport report = verify(s);
  EXPECT_FALSE(report.passed);
  ASSERT_TRUE(report.defect.has_value());
  EXPECT_NE(report.defect->find("step 0"), std::string::npos);
}

TEST(Simulator, DoubleCountingIsADefect) {
  CommSchedule s = build_allreduce(4, 64, AllreduceVariant::RecursiveDoubling);
  // Repeat the first exchange: each rank would add its partner's input twice.
  s.steps.insert(s.steps.begin() + 1, s.steps[0]);
  EXPECT_THROW(execute(s, initial_state(s)), ScheduleDefect);
}

TEST(Simulator, PortViolationIsADefect) {
  CommSchedule s = build_bcast(4, 0, 64, BcastVariant::BinomialDoubling);
  s.steps[1].push_back({0, 1, {0}, {}, 64, false});
  EXPECT_THROW(execute(s, initial_state(s)), ScheduleDefect);
  EXPECT_NO_THROW(execute(s, initial_state(s), {1, false}));
}

TEST(Simulator, OracleDefinitions) {
  const auto bcast = oracle(Collective::Broadcast, 4, 2, 1);
  for (const RankState& r : bcast) EXPECT_EQ(r.slots[0]->contributors, std::vector<Rank>{2});

  const auto rs = oracle(Collective::ReduceScatter, 8, 0, 8);
  for (Rank j = 0; j < 8; ++j) {
    for (std::uint32_t b = 0; b < 8; ++b) {
      if (b == j) {
        EXPECT_EQ(rs[j].slots[b]->block, j);
        EXPECT_EQ(rs[j].slots[b]->contributors, all_ranks(8));
      } else {
        EXPECT_FALSE(rs[j].slots[b].has_value());
      }
    }
  }

  const auto gather = oracle(Collective::Gather, 16, 5, 16);
  for (std::uint32_t b = 0; b < 16; ++b) {
    EXPECT_EQ(gather[5].slots[b]->block, b);
    EXPECT_EQ(gather[5].slots[b]->contributors, std::vector<Rank>{b});
  }
  EXPECT_FALSE(gather[4].slots[0].has_value());

  const auto a2a = oracle(Collective::Alltoall, 4, 0, 4);
  for (Rank j = 0; j < 4; ++j) {
    for (Rank i = 0; i < 4; ++i) {
      EXPECT_EQ(a2a[j].slots[i]->block, i * 4 + j);
      EXPECT_EQ(a2a[j].slots[i]->contributors, std::vector<Rank>{i});
    }
  }

  const auto reduce = oracle(Collective::Reduce, 8, 3, 1);
  EXPECT_EQ(reduce[3].slots[0]->contributors, all_ranks(8));
}

TEST(Simulator, SegmentsSplitBlocks) {
  const CommSchedule s = build_allgather(4, 16, AllgatherVariant::Bine);
  const auto init = initial_state(s, {3, std::nullopt});
  ASSERT_EQ(init[0].slots.size(), 12U);
  EXPECT_EQ(init[2].slots[2 * 3 + 1]->block, 7U);
  EXPECT_TRUE(verify(s, {3, std::nullopt}).passed);
}

TEST(Simulator, VerifyExamples) {
  EXPECT_TRUE(verify(build_allgather(16, 64, AllgatherVariant::Bine)).passed);
  EXPECT_TRUE(verify(build_alltoall(64, 64 * 64, AlltoallVariant::Bine)).passed);
  CommSchedule broken = build_allgather(16, 64, AllgatherVariant::Bine);
  broken.steps.back().pop_back();
  const VerifyReport report = verify(broken);
  EXPECT_FALSE(report.passed);
  ASSERT_TRUE(report.divergence.has_value());
  EXPECT_FALSE(report.divergence->expected.empty());
  EXPECT_NE(report.to_json().find("\"pass\":false"), std::string::npos);
}

TEST(Simulator, EveryVariantMatchesOracle) {
  for (std::uint64_t p = 2; p <= 64; p *= 2) {
    for (Collective c : all_collectives()) {
      for (std::string_view v : variant_names(c)) {
        for (Rank root : {Rank{0}, static_cast<Rank>(p / 2), static_cast<Rank>(p - 1)}) {
          const CommSchedule s = build_schedule({c, std::string(v), p, root, p * 3});
          for (unsigned seg : {1U, 3U}) {
            const VerifyReport report = verify(s, {seg, std::nullopt});
            ASSERT_TRUE(report.passed) << report.to_json();
          }
          const NumericReport numeric = verify_numeric(s);
          ASSERT_TRUE(numeric.passed) << to_string(c) << " " << v << ": " << numeric.message;
          if (!is_rooted(c)) break;
        }
      }
    }
  }
}

TEST(Simulator, ReduceScatterLayouts) {
  for (std::uint64_t p = 2; p <= 128; p *= 2) {
    for (Contiguity c : {Contiguity::Noncontig, Contiguity::PrePermute, Contiguity::UnpermutedOutput}) {
      const CommSchedule s = build_reduce_scatter(p, p, ReduceScatterVariant::Bine, c);
      ASSERT_TRUE(verify(s).passed);
      ASSERT_TRUE(verify_numeric(s).passed);
    }
  }
}

TEST(Simulator, NonPowerOfTwoBaselines) {
  for (std::uint64_t p : {3, 5, 6, 7, 12}) {
    EXPECT_TRUE(verify(build_allgather(p, p, AllgatherVariant::Ring)).passed);
    EXPECT_TRUE(verify(build_reduce_scatter(p, p, ReduceScatterVariant::Ring)).passed);
    EXPECT_TRUE(verify(build_allreduce(p, p, AllreduceVariant::Ring)).passed);
    EXPECT_TRUE(verify(build_alltoall(p, p * p, AlltoallVariant::Pairwise)).passed);
    EXPECT_TRUE(verify(build_alltoall(p, p * p, AlltoallVariant::Linear)).passed);
  }
}

TEST(Simulator, Determinism) {
  const CommSchedule s = build_alltoall(16, 256, AlltoallVariant::Bine);
  EXPECT_EQ(execute(s, initial_state(s)), execute(s, initial_state(s)));
  CommSchedule shuffled = s;
  for (auto& step : shuffled.steps) std::reverse(step.begin(), step.end());
  EXPECT_EQ(execute(shuffled, initial_state(shuffled)), execute(s, initial_state(s)));
}

TEST(Simulator, MutationsAreDetected) {
  std::mt19937_64 rng(20260);
  for (Collective c : all_collectives()) {
    for (std::string_view v : variant_names(c)) {
      const CommSchedule s = build_schedule({c, std::string(v), 16, 0, 16 * 4});
      ASSERT_TRUE(verify(s).passed);
      for (int k = 0; k < 100; ++k) {
        const Mutation m = random_mutation(s, rng);
        const CommSchedule mutated = apply_mutation(s, m);
        ASSERT_FALSE(verify(mutated).passed)
            << to_string(c) << " " << v << " step " << m.step << " transfer " << m.transfer
            << (m.kind == MutationKind::Remove ? " removed" : " retargeted");
      }
    }
  }
}

TEST(Simulator, MutationShapes) {
  const CommSchedule s = build_bcast(8, 0, 64, BcastVariant::BineSmall);
  const CommSchedule removed = apply_mutation(s, {MutationKind::Remove, 2, 0, 0});
  EXPECT_EQ(removed.steps[2].size(), s.steps[2].size() - 1);
  const Transfer& original = s.steps[2][0];
  const Rank target = original.dst == 5 ? 6 : 5;
  const CommSchedule moved = apply_mutation(s, {MutationKind::Retarget, 2, 0, target});
  EXPECT_EQ(moved.steps[2][0].dst, target);
  EXPECT_THROW(apply_mutation(s, {MutationKind::Remove, 9, 0, 0}), std::out_of_range);
}

}  // namespace
}  // namespace bine
