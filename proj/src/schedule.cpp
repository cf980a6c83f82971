// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/schedule.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <utility>

#include "bine/errors.hpp"

namespace bine {

namespace {

constexpr std::array<std::pair<Collective, std::string_view>, 8> kCollectiveNames{{
    {Collective::Broadcast, "broadcast"},
    {Collective::Reduce, "reduce"},
    {Collective::Gather, "gather"},
    {Collective::Scatter, "scatter"},
    {Collective::Allgather, "allgather"},
    {Collective::ReduceScatter, "reduce_scatter"},
    {Collective::Allreduce, "allreduce"},
    {Collective::Alltoall, "alltoall"},
}};

}  // namespace

std::string_view to_string(Collective c) noexcept {
  for (const auto& [k, name] : kCollectiveNames) {
    if (k == c) return name;
  }
  return "unknown";
}

Collective parse_collective(std::string_view name) {
  for (const auto& [k, n] : kCollectiveNames) {
    if (n == name) return k;
  }
  if (name == "bcast") return Collective::Broadcast;
  throw UnsupportedConfiguration("unknown collective '" + std::string(name) + "'");
}

const std::vector<Collective>& all_collectives() {
  static const std::vector<Collective> all = [] {
    std::vector<Collective> out;
    for (const auto& entry : kCollectiveNames) out.push_back(entry.first);
    return out;
  }();
  return all;
}

bool is_rooted(Collective c) noexcept {
  return c == Collective::Broadcast || c == Collective::Reduce || c == Collective::Gather ||
         c == Collective::Scatter;
}

BlockRange::BlockRange(std::int64_t first, std::int64_t last, std::uint32_t modulus)
    : modulus_(modulus) {
  if (modulus == 0) throw DomainError("block range over an empty buffer");
  const auto m = static_cast<std::int64_t>(modulus);
  first_ = static_cast<std::uint32_t>(((first % m) + m) % m);
  last_ = static_cast<std::uint32_t>(((last % m) + m) % m);
}

std::uint32_t BlockRange::size() const noexcept {
  return (last_ + modulus_ - first_) % modulus_ + 1;
}

bool BlockRange::contains(std::int64_t block) const noexcept {
  const auto m = static_cast<std::int64_t>(modulus_);
  const auto k = static_cast<std::uint32_t>(((block % m) + m) % m);
  return (k + modulus_ - first_) % modulus_ < size();
}

std::vector<std::uint32_t> BlockRange::blocks() const {
  std::vector<std::uint32_t> out(size());
  for (std::uint32_t j = 0; j < out.size(); ++j) out[j] = (first_ + j) % modulus_;
  return out;
}

std::uint64_t CommSchedule::total_bytes() const noexcept {
  std::uint64_t total = 0;
  for (const auto& step : steps) {
    for (const Transfer& t : step) total += t.bytes();
  }
  return total;
}

const Permutation* permutation_for(const std::vector<Permutation>& perms, Rank rank) {
  if (perms.empty()) return nullptr;
  if (perms.size() == 1) return &perms.front();
  return &perms.at(rank);
}

std::vector<std::uint64_t> sent_bytes_per_rank(const CommSchedule& schedule) {
  std::vector<std::uint64_t> out(schedule.p, 0);
  for (const auto& step : schedule.steps) {
    for (const Transfer& t : step) out.at(t.src) += t.bytes();
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> sent_blocks_per_step(const CommSchedule& schedule) {
  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(schedule.steps.size());
  for (const auto& step : schedule.steps) {
    std::vector<std::uint64_t> row(schedule.p, 0);
    for (const Transfer& t : step) row.at(t.src) += t.blocks.size();
    out.push_back(std::move(row));
  }
  return out;
}

void canonicalize(CommSchedule& schedule) {
  for (auto& step : schedule.steps) {
    std::stable_sort(step.begin(), step.end(), [](const Transfer& a, const Transfer& b) {
      return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
  }
}

}  // namespace bine
