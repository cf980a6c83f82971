// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bine/negabinary.hpp"

namespace bine {

enum class GroupSource { Block, File, Explicit };

/// Total rank -> group assignment with dense group ids 0..groups-1.
class GroupMap {
 public:
  /// Throws DomainError unless every id in 0..max appears.
  explicit GroupMap(std::vector<std::uint32_t> group_of, GroupSource source = GroupSource::Explicit,
                    std::string origin = {});

  /// Relabels arbitrary ids densely in order of first appearance.
  static GroupMap from_labels(const std::vector<std::uint64_t>& labels,
                              GroupSource source = GroupSource::Explicit, std::string origin = {});

  std::uint64_t size() const noexcept { return group_of_.size(); }
  std::uint32_t group(Rank r) const { return group_of_.at(r); }
  const std::vector<std::uint32_t>& groups() const noexcept { return group_of_; }
  std::uint32_t group_count() const noexcept { return count_; }
  GroupSource source() const noexcept { return source_; }
  /// "block:<g>", "file:<path>" or "explicit".
  std::string describe() const;
  std::string to_json() const;

  friend bool operator==(const GroupMap& a, const GroupMap& b) { return a.group_of_ == b.group_of_; }

 private:
  std::vector<std::uint32_t> group_of_;
  std::uint32_t count_ = 0;
  GroupSource source_;
  std::string origin_;
};

/// group_of(r) = r / group_size.
GroupMap block_groups(std::uint64_t p, std::uint64_t group_size);

/// p consecutive nodes starting `offset` nodes into a machine whose groups hold
/// `group_size` nodes each: group_of(r) = (r + offset) / group_size, relabelled.
GroupMap shifted_block_groups(std::uint64_t p, std::uint64_t group_size, std::uint64_t offset);

/// One job: ranks are assigned to nodes in listed order, one process per node.
struct AllocationRecord {
  std::string job;
  std::vector<std::string> nodes;
  std::vector<std::uint64_t> groups;  // group label per node, as read

  std::uint64_t size() const noexcept { return nodes.size(); }
  GroupMap group_map() const;
};

struct AllocationSet {
  std::vector<AllocationRecord> records;
  std::vector<std::string> warnings;
};

/// CSV with header `job,node,group`; rows in rank order within each job. Blank
/// lines and lines starting with '#' are ignored. Throws ParseError with the
/// 1-based line number on malformed input or a repeated (job, node) pair; jobs
/// with fewer than two nodes are dropped with a warning.
AllocationSet parse_allocation(std::istream& in, const std::string& origin = "<stream>");
AllocationSet load_allocation(const std::string& path);
void write_allocation(std::ostream& out, const std::vector<AllocationRecord>& records);

/// Job whose rank r sits in group `map.group(r)`, with nodes named n<r>.
AllocationRecord record_from_groups(const std::string& job, const GroupMap& map);

/// Synthetic contiguous allocations: for every p, `per_size` jobs placed at a
/// random offset in a machine with a random group size in [min_group, max_group].
std::vector<AllocationRecord> random_block_allocations(const std::vector<std::uint64_t>& sizes,
                                                       std::size_t per_size,
                                                       std::uint64_t min_group,
                                                       std::uint64_t max_group, std::uint64_t seed);

/// Row-major rank <-> coordinate mapping over a grid of the given dimensions.
class TorusMap {
 public:
  TorusMap(std::uint64_t p, std::vector<std::uint32_t> dims);

  std::uint64_t size() const noexcept { return p_; }
  const std::vector<std::uint32_t>& dims() const noexcept { return dims_; }
  std::vector<std::uint32_t> coords(Rank r) const;
  Rank rank(const std::vector<std::uint32_t>& coords) const;
  /// Hops between two ranks with wrap-around links in every dimension.
  std::uint64_t hops(Rank a, Rank b) const;

 private:
  std::uint64_t p_;
  std::vector<std::uint32_t> dims_;
};

/// Coordinates of every rank; throws DomainError if the product of dims is not p.
std::vector<std::vector<std::uint32_t>> torus_coords(std::uint64_t p,
                                                     const std::vector<std::uint32_t>& dims);

}  // namespace bine
