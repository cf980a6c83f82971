// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

// Integer execution mode: every block holds a few int32 elements and reductions
// are wrapping elementwise sums.

#include <cstdint>
#include <vector>

#include "bine/simulator.hpp"
#include "simulator_support.hpp"

namespace bine {

namespace {

std::uint32_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return static_cast<std::uint32_t>(x ^ (x >> 31));
}

}  // namespace

NumericReport verify_numeric(const CommSchedule& schedule, unsigned elements_per_block,
                             std::uint64_t seed) {
  NumericReport report;
  if (elements_per_block == 0) {
    report.message = "elements_per_block must be positive";
    return report;
  }
  const detail::BufferShape shape{schedule.collective, schedule.p,  schedule.root,
                                  schedule.num_blocks, 1,           &schedule.result_blocks};
  const std::uint64_t p = schedule.p;
  const std::uint64_t slots = shape.slots();
  const unsigned width = elements_per_block;
  auto input = [&](Rank origin, std::uint32_t block, unsigned e) {
    return mix(seed ^ (std::uint64_t{origin} << 40) ^ (std::uint64_t{block} << 8) ^ e);
  };

  std::vector<std::uint32_t> data(p * slots * width, 0);
  std::vector<bool> present(p * slots, false);
  auto at = [&](Rank r, std::uint64_t slot) { return r * slots + slot; };
  for (Rank r = 0; r < p; ++r) {
    for (std::uint64_t k = 0; k < slots; ++k) {
      if (!shape.has_input(r, k)) continue;
      present[at(r, k)] = true;
      for (unsigned e = 0; e < width; ++e) {
        data[at(r, k) * width + e] = input(r, shape.input_block(r, k), e);
      }
    }
  }

  auto permute = [&](const std::vector<Permutation>& perms) {
    if (perms.empty()) return true;
    std::vector<std::uint32_t> moved(slots * width);
    std::vector<bool> moved_present(slots);
    for (Rank r = 0; r < p; ++r) {
      const Permutation* perm = permutation_for(perms, r);
      if (perm == nullptr || !detail::is_permutation_of(*perm, schedule.num_blocks)) return false;
      for (std::uint64_t k = 0; k < slots; ++k) {
        moved_present[(*perm)[k]] = present[at(r, k)];
        for (unsigned e = 0; e < width; ++e) {
          moved[(*perm)[k] * width + e] = data[at(r, k) * width + e];
        }
      }
      for (std::uint64_t k = 0; k < slots; ++k) present[at(r, k)] = moved_present[k];
      std::copy(moved.begin(), moved.end(), data.begin() + static_cast<std::ptrdiff_t>(at(r, 0) * width));
    }
    return true;
  };

  if (!permute(schedule.initial_permutation)) {
    report.message = "invalid initial permutation";
    return report;
  }
  struct Message {
    std::uint64_t index;
    bool reduce;
    std::vector<std::uint32_t> values;
  };
  for (std::size_t t = 0; t < schedule.steps.size(); ++t) {
    std::vector<Message> messages;
    for (const Transfer& x : schedule.steps[t]) {
      for (std::size_t k = 0; k < x.blocks.size(); ++k) {
        if (x.src >= p || x.dst >= p || x.blocks[k] >= slots || x.dst_block(k) >= slots ||
            !present[at(x.src, x.blocks[k])]) {
          report.message = "invalid or empty read at step " + std::to_string(t);
          return report;
        }
        const auto begin = data.begin() + static_cast<std::ptrdiff_t>(at(x.src, x.blocks[k]) * width);
        messages.push_back({at(x.dst, x.dst_block(k)), x.reduce, {begin, begin + width}});
      }
    }
    for (const Message& m : messages) {
      if (m.reduce && !present[m.index]) {
        report.message = "reduction into an empty slot at step " + std::to_string(t);
        return report;
      }
      present[m.index] = true;
      for (unsigned e = 0; e < width; ++e) {
        std::uint32_t& cell = data[m.index * width + e];
        cell = m.reduce ? cell + m.values[e] : m.values[e];
      }
    }
  }
  if (!permute(schedule.final_permutation)) {
    report.message = "invalid final permutation";
    return report;
  }

  std::vector<std::uint32_t> totals(slots * width, 0);
  for (std::uint64_t k = 0; k < slots; ++k) {
    for (unsigned e = 0; e < width; ++e) {
      for (Rank r = 0; r < p; ++r) totals[k * width + e] += input(r, static_cast<std::uint32_t>(k), e);
    }
  }
  for (Rank r = 0; r < p; ++r) {
    for (std::uint64_t k = 0; k < slots; ++k) {
      const detail::Expectation want = detail::expected_slot(shape, r, k);
      if (!want.specified) continue;
      for (unsigned e = 0; e < width; ++e) {
        const std::uint32_t expected =
            want.origin ? input(*want.origin, want.block, e) : totals[k * width + e];
        if (!present[at(r, k)] || data[at(r, k) * width + e] != expected) {
          report.message = "rank " + std::to_string(r) + " block " + std::to_string(k) +
                           " element " + std::to_string(e) + " differs";
          return report;
        }
      }
    }
  }
  report.passed = true;
  report.message = "ok";
  return report;
}

}  // namespace bine
