// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/trees.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "bine/errors.hpp"

namespace bine {
namespace {

std::int64_t signed_rank(Rank r, std::uint64_t p, unsigned s) {
  std::int64_t m = 0;
  for (unsigned j = 0; j < s; j += 2) m += std::int64_t{1} << j;
  return r <= m ? std::int64_t{r} : std::int64_t{r} - std::int64_t(p);
}

// Negabinary digits of x by repeated division.
std::uint64_t nb_bits(std::int64_t x) {
  std::uint64_t bits = 0;
  for (unsigned j = 0; x != 0; ++j) {
    std::int64_t rem = x % -2;
    x /= -2;
    if (rem < 0) {
      rem += 2;
      x += 1;
    }
    bits |= static_cast<std::uint64_t>(rem) << j;
  }
  return bits;
}

std::uint64_t code_of(Rank r, std::uint64_t p) {
  return nb_bits(signed_rank(r, p, step_count(p)));
}

std::uint64_t nu_oracle(Rank r, std::uint64_t p) {
  const Rank base = r % 2 == 0 ? static_cast<Rank>((p - r) % p) : r;
  const std::uint64_t h = code_of(base, p);
  return h ^ (h >> 1);
}

std::vector<std::uint64_t> powers_of_two(std::uint64_t max) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= max; p *= 2) out.push_back(p);
  return out;
}

const TreeKind kKinds[] = {TreeKind::BineHalving, TreeKind::BineDoubling, TreeKind::BinomialHalving,
                           TreeKind::BinomialDoubling};

TEST(Trees, PaperPartners) {
  EXPECT_EQ(halving_partner(8, 2, 16, 0), 7U);
  EXPECT_EQ(halving_partner(0, 1, 16, 0), 3U);
  EXPECT_EQ(halving_partner(3, 2, 16, 0), 4U);
  EXPECT_EQ(halving_join_step(8, 16, 0), std::optional<Step>(1));
  EXPECT_EQ(halving_join_step(3, 16, 0), std::optional<Step>(1));
  EXPECT_EQ(halving_join_step(0, 16, 0), std::nullopt);
}

TEST(Trees, PaperNuValues) {
  EXPECT_EQ(nu(2, 8).value, 0b011U);
  EXPECT_EQ(nu(5, 8).value, 0b111U);
  EXPECT_EQ(nu(1, 8).value & 1U, 1U);
  EXPECT_EQ(doubling_partner(2, 2, 8, 0), 5U);
  EXPECT_EQ(doubling_partner(0, 0, 8, 0), 1U);
  EXPECT_EQ(doubling_join_step(2, 8, 0), std::optional<Step>(1));
  EXPECT_EQ(doubling_join_step(1, 8, 0), std::optional<Step>(0));
  EXPECT_EQ(doubling_join_step(5, 8, 0), std::optional<Step>(2));
}

TEST(Trees, BineDistanceValues) {
  EXPECT_EQ(bine_distance(0, 3), 3U);
  EXPECT_EQ(bine_distance(2, 3), 1U);
  EXPECT_EQ(bine_distance(1, 4), 3U);
  for (unsigned s = 1; s <= 40; ++s) {
    for (Step i = 0; i < s; ++i) {
      std::int64_t sum = 0;
      std::int64_t w = 1;
      for (unsigned j = 0; j < s - i; ++j, w *= -2) sum += w;
      ASSERT_EQ(bine_distance(i, s), static_cast<std::uint64_t>(std::llabs(sum)));
    }
  }
}

TEST(Trees, HalvingPartnerMatchesCodeFlip) {
  for (std::uint64_t p : powers_of_two(1024)) {
    const unsigned s = step_count(p);
    std::map<std::uint64_t, Rank> by_code;
    for (Rank r = 0; r < p; ++r) by_code[code_of(r, p)] = r;
    for (Rank r = 0; r < p; ++r) {
      for (Step i = 0; i < s; ++i) {
        const std::uint64_t mask = (std::uint64_t{1} << (s - i)) - 1;
        const Rank q = by_code.at(code_of(r, p) ^ mask);
        ASSERT_EQ(halving_partner(r, i, p, 0), q);
        ASSERT_EQ(halving_partner(q, i, p, 0), r);
      }
    }
  }
}

TEST(Trees, RootRotation) {
  for (std::uint64_t p : powers_of_two(64)) {
    const unsigned s = step_count(p);
    for (Rank root = 0; root < p; ++root) {
      for (Rank r = 0; r < p; ++r) {
        const Rank v = static_cast<Rank>((r + p - root) % p);
        ASSERT_EQ(halving_join_step(r, p, root), halving_join_step(v, p, 0));
        ASSERT_EQ(doubling_join_step(r, p, root), doubling_join_step(v, p, 0));
        for (Step i = 0; i < s; ++i) {
          ASSERT_EQ(halving_partner(r, i, p, root), (halving_partner(v, i, p, 0) + root) % p);
          ASSERT_EQ(doubling_partner(r, i, p, root), (doubling_partner(v, i, p, 0) + root) % p);
        }
      }
    }
  }
}

TEST(Trees, NuMatchesOracleAndIsBijective) {
  for (std::uint64_t p : powers_of_two(1U << 14)) {
    const unsigned s = step_count(p);
    std::vector<bool> seen(p, false);
    for (Rank r = 0; r < p; ++r) {
      const NuCode c = nu(r, p);
      ASSERT_EQ(c.value, nu_oracle(r, p)) << "p=" << p << " r=" << r;
      ASSERT_EQ(c.odd, r % 2 == 1);
      ASSERT_EQ(c.width, s);
      ASSERT_LT(c.value, p);
      ASSERT_FALSE(seen[c.value]);
      seen[c.value] = true;
    }
  }
}

TEST(Trees, DoublingPartnerFlipsNuBit) {
  for (std::uint64_t p : powers_of_two(1024)) {
    const unsigned s = step_count(p);
    for (Rank r = 0; r < p; ++r) {
      for (Step i = 0; i < s; ++i) {
        const Rank q = doubling_partner(r, i, p, 0);
        ASSERT_EQ(nu_oracle(q, p), nu_oracle(r, p) ^ (std::uint64_t{1} << i));
        ASSERT_EQ(doubling_partner(q, i, p, 0), r);
      }
    }
  }
}

TEST(Trees, CommTreeInvariants) {
  for (std::uint64_t p : powers_of_two(1024)) {
    const unsigned s = step_count(p);
    for (TreeKind kind : kKinds) {
      for (Rank root : {Rank{0}, static_cast<Rank>(p / 2), static_cast<Rank>(p - 1)}) {
        const CommTree tree = build_tree(kind, p, root);
        ASSERT_EQ(tree.edges().size(), p - 1);
        ASSERT_EQ(tree.steps(), s);
        std::vector<std::set<Rank>> busy(s);
        for (const TreeEdge& e : tree.edges()) {
          ASSERT_LT(e.step, s);
          ASSERT_TRUE(busy[e.step].insert(e.child).second);
          ASSERT_TRUE(busy[e.step].insert(e.parent).second);
        }
        // Every rank reaches the root, and parents hold the data before children.
        for (Rank r = 0; r < p; ++r) {
          Rank at = r;
          std::optional<Step> last;
          for (unsigned hops = 0; at != root; ++hops) {
            ASSERT_LE(hops, s);
            const Step st = *tree.join_step(at);
            if (last) ASSERT_LT(st, *last);
            last = st;
            at = *tree.parent(at);
          }
        }
        ASSERT_EQ(tree.parent(root), std::nullopt);
      }
    }
  }
}

TEST(Trees, EdgeDistances) {
  for (std::uint64_t p : powers_of_two(1024)) {
    const unsigned s = step_count(p);
    for (TreeKind kind : kKinds) {
      const CommTree tree = build_tree(kind, p, 0);
      for (const TreeEdge& e : tree.edges()) {
        const std::uint64_t d = modulo_distance(e.child, e.parent, p);
        switch (kind) {
          case TreeKind::BineHalving: ASSERT_EQ(d, bine_distance(e.step, s)); break;
          case TreeKind::BineDoubling: ASSERT_EQ(d, bine_distance(s - 1 - e.step, s)); break;
          case TreeKind::BinomialHalving: ASSERT_EQ(d, std::uint64_t{1} << (s - e.step - 1)); break;
          case TreeKind::BinomialDoubling: ASSERT_EQ(d, std::uint64_t{1} << e.step); break;
        }
      }
    }
  }
}

TEST(Trees, DistanceRatioLaw) {
  for (unsigned s = 1; s <= 20; ++s) {
    for (Step i = 0; i < s; ++i) {
      const unsigned k = s - i;
      const std::uint64_t bine = bine_distance(i, s);
      const std::uint64_t binomial = std::uint64_t{1} << (k - 1);
      // (2/3)(1 - (-1)^k 2^-k) = (2^k - (-1)^k) / (3 * 2^(k-1)), compared exactly.
      const std::int64_t numer = (std::int64_t{1} << k) - (k % 2 == 0 ? 1 : -1);
      ASSERT_EQ(static_cast<std::int64_t>(bine) * 3 * static_cast<std::int64_t>(binomial),
                numer * static_cast<std::int64_t>(binomial));
      ASSERT_LE(bine, binomial);
    }
  }
}

TEST(Trees, BinomialShapes) {
  const CommTree doubling = build_tree(TreeKind::BinomialDoubling, 8, 0);
  const std::vector<TreeEdge> expected_doubling{{1, 0, 0}, {2, 0, 1}, {3, 1, 1}, {4, 0, 2},
                                                {5, 1, 2}, {6, 2, 2}, {7, 3, 2}};
  EXPECT_EQ(doubling.edges(), expected_doubling);
  const CommTree halving = build_tree(TreeKind::BinomialHalving, 8, 0);
  EXPECT_EQ(halving.edges().front(), (TreeEdge{4, 0, 0}));
  EXPECT_EQ(halving.children(0), (std::vector<Rank>{4, 2, 1}));
}

TEST(Trees, BineHalvingContainsPaperRoute) {
  const CommTree tree = build_tree(TreeKind::BineHalving, 16, 0);
  EXPECT_EQ(tree.parent(3), std::optional<Rank>(0));
  EXPECT_EQ(tree.parent(4), std::optional<Rank>(3));
  EXPECT_EQ(tree.join_step(4), std::optional<Step>(2));
}

TEST(Trees, SubtreeExamples) {
  EXPECT_EQ(subtree_members(8, TreeKind::BineHalving, 16, 0), (std::vector<Rank>{6, 7, 8, 9}));
  for (TreeKind kind : kKinds) {
    const CommTree tree = build_tree(kind, 32, 5);
    EXPECT_EQ(subtree_members(5, kind, 32, 5).size(), 32U);
    for (Rank r = 0; r < 32; ++r) {
      if (tree.join_step(r) == std::optional<Step>(4)) {
        EXPECT_EQ(subtree_members(r, kind, 32, 5), std::vector<Rank>{r});
      }
    }
  }
}

TEST(Trees, SubtreeClosureAndBitCharacterization) {
  for (std::uint64_t p : powers_of_two(1024)) {
    const unsigned s = step_count(p);
    for (TreeKind kind : {TreeKind::BineHalving, TreeKind::BineDoubling}) {
      const Rank root = static_cast<Rank>(p / 2 + (p > 2 ? 1 : 0)) % static_cast<Rank>(p);
      const CommTree tree = build_tree(kind, p, root);
      std::vector<std::vector<Rank>> members(p);
      for (Rank r = 0; r < p; ++r) members[r] = subtree_members(r, kind, p, root);
      for (Rank r = 0; r < p; ++r) {
        std::vector<Rank> closure{r};
        for (Rank c : tree.children(r)) closure.insert(closure.end(), members[c].begin(), members[c].end());
        std::sort(closure.begin(), closure.end());
        ASSERT_EQ(members[r], closure);
        if (r == root) continue;
        const unsigned keep = *tree.join_step(r) + 1;
        std::vector<Rank> by_bits;
        const Rank vr = static_cast<Rank>((r + p - root) % p);
        for (Rank q = 0; q < p; ++q) {
          const Rank vq = static_cast<Rank>((q + p - root) % p);
          bool same = false;
          if (kind == TreeKind::BineHalving) {
            same = (code_of(vq, p) >> (s - keep)) == (code_of(vr, p) >> (s - keep));
          } else {
            const std::uint64_t low = (std::uint64_t{1} << keep) - 1;
            same = (nu_oracle(vq, p) & low) == (nu_oracle(vr, p) & low);
          }
          if (same) by_bits.push_back(q);
        }
        ASSERT_EQ(members[r], by_bits) << "p=" << p << " r=" << r;
      }
    }
  }
}

TEST(Trees, DoublingHalvingDuality) {
  for (std::uint64_t p : powers_of_two(1024)) {
    const unsigned s = step_count(p);
    std::vector<std::multiset<std::uint64_t>> halving(s);
    std::vector<std::multiset<std::uint64_t>> doubling(s);
    const CommTree halving_tree = build_tree(TreeKind::BineHalving, p, 0);
    for (const TreeEdge& e : halving_tree.edges()) {
      halving[e.step].insert(modulo_distance(e.child, e.parent, p));
    }
    const CommTree doubling_tree = build_tree(TreeKind::BineDoubling, p, 0);
    for (const TreeEdge& e : doubling_tree.edges()) {
      doubling[e.step].insert(modulo_distance(e.child, e.parent, p));
    }
    // Edge counts double per step in both trees, so the reversed order shows
    // up in the set of distances per step.
    for (unsigned i = 0; i < s; ++i) {
      const std::set<std::uint64_t> h(halving[s - 1 - i].begin(), halving[s - 1 - i].end());
      const std::set<std::uint64_t> d(doubling[i].begin(), doubling[i].end());
      ASSERT_EQ(h, d) << "p=" << p << " step " << i;
      ASSERT_EQ(doubling[i].size(), std::size_t{1} << i);
    }
  }
}

TEST(Trees, Errors) {
  EXPECT_THROW(build_tree(TreeKind::BineHalving, 12, 0), UnsupportedConfiguration);
  EXPECT_THROW(halving_partner(0, 3, 8, 0), DomainError);
  EXPECT_THROW(doubling_partner(0, 5, 16, 0), DomainError);
  EXPECT_THROW(parse_tree_kind("fibonacci"), UnsupportedConfiguration);
  EXPECT_EQ(parse_tree_kind(to_string(TreeKind::BineDoubling)), TreeKind::BineDoubling);
}

}  // namespace
}  // namespace bine
