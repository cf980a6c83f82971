// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "bine/negabinary.hpp"

namespace bine {

enum class TreeKind { BineHalving, BineDoubling, BinomialHalving, BinomialDoubling };

std::string_view to_string(TreeKind kind) noexcept;
TreeKind parse_tree_kind(std::string_view name);

struct TreeEdge {
  Rank child;
  Rank parent;
  Step step;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// A rooted spanning tree over p ranks where every edge is active at one step.
class CommTree {
 public:
  CommTree(TreeKind kind, std::uint64_t p, Rank root, std::vector<TreeEdge> edges);

  TreeKind kind() const noexcept { return kind_; }
  std::uint64_t size() const noexcept { return p_; }
  Rank root() const noexcept { return root_; }
  unsigned steps() const noexcept { return steps_; }

  /// Ordered by step, then parent, then child.
  const std::vector<TreeEdge>& edges() const noexcept { return edges_; }

  std::optional<Rank> parent(Rank r) const;
  std::optional<Step> join_step(Rank r) const;
  std::vector<Rank> children(Rank r) const;

 private:
  TreeKind kind_;
  std::uint64_t p_;
  Rank root_;
  unsigned steps_;
  std::vector<TreeEdge> edges_;
  std::vector<std::int64_t> parent_of_;
  std::vector<std::int64_t> step_of_;
};

/// Partner of r at step i in the distance-halving Bine tree: the rank whose
/// negabinary code differs in the s - i least significant bits.
Rank halving_partner(Rank r, Step i, std::uint64_t p, Rank root = 0);

/// Step at which r receives from its parent; nullopt for the root.
std::optional<Step> halving_join_step(Rank r, std::uint64_t p, Rank root = 0);

struct NuCode {
  std::uint64_t value;
  bool odd;
  unsigned width;
};

/// h(r) xor (h(r) >> 1), with h(r) = rank2nb(p - r) for even r and rank2nb(r) for odd r.
NuCode nu(Rank r, std::uint64_t p);

/// Forward and inverse nu for one rank count. Construction checks that nu is a
/// bijection onto the s-bit patterns.
class NuTable {
 public:
  explicit NuTable(std::uint64_t p);

  std::uint64_t size() const noexcept { return p_; }
  std::uint64_t nu_of(Rank r) const { return forward_.at(r); }
  Rank rank_of(std::uint64_t nu_value) const { return inverse_.at(nu_value); }

  /// Shared table for p; built on first use.
  static std::shared_ptr<const NuTable> get(std::uint64_t p);

 private:
  std::uint64_t p_;
  std::vector<std::uint64_t> forward_;
  std::vector<Rank> inverse_;
};

/// Partner of r at step i in the distance-doubling Bine tree: nu(q) = nu(r) xor 2^i.
Rank doubling_partner(Rank r, Step i, std::uint64_t p, Rank root = 0);

/// Position of the highest set bit of nu(r - root); nullopt for the root.
std::optional<Step> doubling_join_step(Rank r, std::uint64_t p, Rank root = 0);

/// r and all of its descendants, sorted.
std::vector<Rank> subtree_members(Rank r, TreeKind kind, std::uint64_t p, Rank root = 0);

CommTree build_tree(TreeKind kind, std::uint64_t p, Rank root = 0);

/// |sum_{j < s-i} (-2)^j| = (2^{s-i} - (-1)^{s-i}) / 3, the modulo distance
/// between partners at step i of a distance-halving Bine tree.
std::uint64_t bine_distance(Step i, unsigned s);

}  // namespace bine
