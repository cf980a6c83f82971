// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/trees.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <utility>

#include "bine/errors.hpp"

namespace bine {

namespace {

constexpr std::array<std::pair<TreeKind, std::string_view>, 4> kTreeNames{{
    {TreeKind::BineHalving, "bine_halving"},
    {TreeKind::BineDoubling, "bine_doubling"},
    {TreeKind::BinomialHalving, "binomial_halving"},
    {TreeKind::BinomialDoubling, "binomial_doubling"},
}};

Rank to_virtual(Rank r, Rank root, std::uint64_t p) {
  return static_cast<Rank>((r + p - root % p) % p);
}

Rank to_actual(Rank v, Rank root, std::uint64_t p) { return static_cast<Rank>((v + root) % p); }

void check_rank(Rank r, std::uint64_t p) {
  if (r >= p) {
    throw DomainError("rank " + std::to_string(r) + " out of range for p = " + std::to_string(p));
  }
}

void check_step(Step i, unsigned s) {
  if (i >= s) {
    throw DomainError("step " + std::to_string(i) + " out of range [0, " + std::to_string(s) + ")");
  }
}

unsigned highest_bit(std::uint64_t x) { return 63U - static_cast<unsigned>(std::countl_zero(x)); }

// Join step and parent of virtual rank v (v != 0) in the tree rooted at 0.
std::pair<Step, Rank> join_virtual(TreeKind kind, Rank v, std::uint64_t p, unsigned s) {
  switch (kind) {
    case TreeKind::BineHalving: {
      const NegabinaryCode code = rank2nb(v, p);
      const Step i = s - trailing_equal_bits(code);
      return {i, nb2rank(code.flip_low_bits(s - i), p)};
    }
    case TreeKind::BineDoubling: {
      const auto table = NuTable::get(p);
      const std::uint64_t value = table->nu_of(v);
      const Step i = highest_bit(value);
      return {i, table->rank_of(value ^ (1ULL << i))};
    }
    case TreeKind::BinomialHalving: {
      const auto low = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(v)));
      return {s - 1 - low, static_cast<Rank>(v ^ (1U << low))};
    }
    case TreeKind::BinomialDoubling: {
      const unsigned high = highest_bit(v);
      return {high, static_cast<Rank>(v ^ (1U << high))};
    }
  }
  throw DomainError("unknown tree kind");
}

}  // namespace

std::string_view to_string(TreeKind kind) noexcept {
  for (const auto& [k, name] : kTreeNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

TreeKind parse_tree_kind(std::string_view name) {
  for (const auto& [k, n] : kTreeNames) {
    if (n == name) return k;
  }
  throw UnsupportedConfiguration("unknown tree kind '" + std::string(name) + "'");
}

CommTree::CommTree(TreeKind kind, std::uint64_t p, Rank root, std::vector<TreeEdge> edges)
    : kind_(kind),
      p_(p),
      root_(root),
      steps_(step_count(p)),
      edges_(std::move(edges)),
      parent_of_(p, -1),
      step_of_(p, -1) {
  check_rank(root, p);
  std::sort(edges_.begin(), edges_.end(), [](const TreeEdge& a, const TreeEdge& b) {
    return std::tie(a.step, a.parent, a.child) < std::tie(b.step, b.parent, b.child);
  });
  for (const TreeEdge& e : edges_) {
    check_rank(e.child, p);
    check_rank(e.parent, p);
    check_step(e.step, steps_);
    if (parent_of_[e.child] != -1) {
      throw DomainError("rank " + std::to_string(e.child) + " has two parents");
    }
    parent_of_[e.child] = e.parent;
    step_of_[e.child] = e.step;
  }
}

std::optional<Rank> CommTree::parent(Rank r) const {
  check_rank(r, p_);
  if (parent_of_[r] < 0) return std::nullopt;
  return static_cast<Rank>(parent_of_[r]);
}

std::optional<Step> CommTree::join_step(Rank r) const {
  check_rank(r, p_);
  if (step_of_[r] < 0) return std::nullopt;
  return static_cast<Step>(step_of_[r]);
}

std::vector<Rank> CommTree::children(Rank r) const {
  std::vector<Rank> out;
  for (const TreeEdge& e : edges_) {
    if (e.parent == r) out.push_back(e.child);
  }
  return out;
}

Rank halving_partner(Rank r, Step i, std::uint64_t p, Rank root) {
  const unsigned s = step_count(p);
  check_rank(r, p);
  check_rank(root, p);
  check_step(i, s);
  const NegabinaryCode code = rank2nb(to_virtual(r, root, p), p);
  return to_actual(nb2rank(code.flip_low_bits(s - i), p), root, p);
}

std::optional<Step> halving_join_step(Rank r, std::uint64_t p, Rank root) {
  const unsigned s = step_count(p);
  check_rank(r, p);
  check_rank(root, p);
  const Rank v = to_virtual(r, root, p);
  if (v == 0) return std::nullopt;
  return s - trailing_equal_bits(rank2nb(v, p));
}

NuCode nu(Rank r, std::uint64_t p) {
  const unsigned s = step_count(p);
  check_rank(r, p);
  const bool odd = (r & 1U) != 0;
  const Rank source = odd ? r : static_cast<Rank>((p - r) % p);
  const std::uint64_t h = rank2nb(source, p).bits();
  return NuCode{h ^ (h >> 1), odd, s};
}

NuTable::NuTable(std::uint64_t p) : p_(p), forward_(p), inverse_(p, 0) {
  std::vector<bool> seen(p, false);
  for (Rank r = 0; r < p; ++r) {
    const std::uint64_t value = nu(r, p).value;
    if (value >= p || seen[value]) {
      throw DomainError("nu is not a bijection for p = " + std::to_string(p));
    }
    seen[value] = true;
    forward_[r] = value;
    inverse_[value] = r;
  }
}

std::shared_ptr<const NuTable> NuTable::get(std::uint64_t p) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::shared_ptr<const NuTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[p];
  if (!slot) slot = std::make_shared<const NuTable>(p);
  return slot;
}

Rank doubling_partner(Rank r, Step i, std::uint64_t p, Rank root) {
  const unsigned s = step_count(p);
  check_rank(r, p);
  check_rank(root, p);
  check_step(i, s);
  const auto table = NuTable::get(p);
  const Rank v = to_virtual(r, root, p);
  return to_actual(table->rank_of(table->nu_of(v) ^ (1ULL << i)), root, p);
}

std::optional<Step> doubling_join_step(Rank r, std::uint64_t p, Rank root) {
  step_count(p);
  check_rank(r, p);
  check_rank(root, p);
  const Rank v = to_virtual(r, root, p);
  if (v == 0) return std::nullopt;
  return highest_bit(NuTable::get(p)->nu_of(v));
}

std::vector<Rank> subtree_members(Rank r, TreeKind kind, std::uint64_t p, Rank root) {
  const unsigned s = step_count(p);
  check_rank(r, p);
  check_rank(root, p);
  const Rank v = to_virtual(r, root, p);
  std::vector<Rank> out;
  if (v == 0) {
    out.resize(p);
    for (Rank q = 0; q < p; ++q) out[q] = q;
    return out;
  }
  const Step i = join_virtual(kind, v, p, s).first;
  // Members agree with v on the top i+1 bits (halving) or the low i+1 bits (doubling)
  // of the representation the tree is indexed by.
  const std::uint64_t low = (1ULL << (i + 1)) - 1;
  const std::uint64_t high = ((1ULL << s) - 1) & ~((1ULL << (s - i - 1)) - 1);
  std::shared_ptr<const NuTable> table;
  if (kind == TreeKind::BineDoubling) table = NuTable::get(p);
  auto key = [&](Rank u) -> std::uint64_t {
    switch (kind) {
      case TreeKind::BineHalving: return rank2nb(u, p).bits() & high;
      case TreeKind::BineDoubling: return table->nu_of(u) & low;
      case TreeKind::BinomialHalving: return u & high;
      case TreeKind::BinomialDoubling: return u & low;
    }
    return 0;
  };
  const std::uint64_t target = key(v);
  for (Rank u = 0; u < p; ++u) {
    if (key(u) == target) out.push_back(to_actual(u, root, p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CommTree build_tree(TreeKind kind, std::uint64_t p, Rank root) {
  const unsigned s = step_count(p);
  check_rank(root, p);
  std::vector<TreeEdge> edges;
  edges.reserve(p - 1);
  for (Rank v = 1; v < p; ++v) {
    const auto [step, parent] = join_virtual(kind, v, p, s);
    edges.push_back(TreeEdge{to_actual(v, root, p), to_actual(parent, root, p), step});
  }
  return CommTree(kind, p, root, std::move(edges));
}

std::uint64_t bine_distance(Step i, unsigned s) {
  if (s == 0 || s > 62) throw DomainError("step count out of range");
  check_step(i, s);
  const unsigned k = s - i;
  const std::uint64_t pow = 1ULL << k;
  return (k % 2 == 0) ? (pow - 1) / 3 : (pow + 1) / 3;
}

}  // namespace bine
