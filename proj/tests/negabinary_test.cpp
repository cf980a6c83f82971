// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/negabinary.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "bine/errors.hpp"

namespace bine {
namespace {

// Digit-by-digit evaluation, independent of NegabinaryCode::value().
std::int64_t eval_digits(std::uint64_t bits, unsigned width) {
  std::int64_t value = 0;
  std::int64_t weight = 1;
  for (unsigned j = 0; j < width; ++j) {
    if ((bits >> j) & 1U) value += weight;
    weight *= -2;
  }
  return value;
}

// Repeated division by -2 with non-negative remainders.
std::uint64_t encode_by_division(std::int64_t x) {
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

NegabinaryCode code(const char* digits) {
  std::uint64_t bits = 0;
  unsigned width = 0;
  for (const char* c = digits; *c != '\0'; ++c, ++width) bits = (bits << 1) | (*c == '1' ? 1U : 0U);
  return NegabinaryCode(bits, width);
}

TEST(Negabinary, PaperEncodings) {
  EXPECT_EQ(rank2nb(2, 8).to_string(), "110");
  EXPECT_EQ(rank2nb(6, 8).to_string(), "010");
  EXPECT_EQ(rank2nb(0, 16).to_string(), "0000");
}

TEST(Negabinary, Decoding) {
  EXPECT_EQ(nb2rank(code("111"), 8), 3U);
  EXPECT_EQ(nb2rank(code("011"), 8), 7U);
  EXPECT_THROW(nb2rank(code("0011"), 8), DomainError);
}

TEST(Negabinary, MaxPositive) {
  EXPECT_EQ(max_positive(6), 21);
  EXPECT_EQ(max_positive(3), 5);
  EXPECT_EQ(max_positive(1), 1);
  for (unsigned w = 1; w <= 40; ++w) {
    std::uint64_t pattern = 0;
    for (unsigned j = 0; j < w; j += 2) pattern |= std::uint64_t{1} << j;
    EXPECT_EQ(max_positive(w), eval_digits(pattern, w)) << w;
  }
}

TEST(Negabinary, TrailingEqualBits) {
  EXPECT_EQ(trailing_equal_bits(code("1000")), 3U);
  EXPECT_EQ(trailing_equal_bits(code("1011")), 2U);
  EXPECT_EQ(trailing_equal_bits(code("0000")), 4U);
  EXPECT_EQ(trailing_equal_bits(code("1")), 1U);
}

TEST(Negabinary, ValueMatchesDigitSum) {
  for (unsigned w = 1; w <= 10; ++w) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << w); ++bits) {
      ASSERT_EQ(NegabinaryCode(bits, w).value(), eval_digits(bits, w));
    }
  }
}

TEST(Negabinary, ValueRangeOfEveryWidth) {
  for (unsigned w = 1; w <= 12; ++w) {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << w); ++bits) {
      const std::int64_t v = NegabinaryCode(bits, w).value();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const std::int64_t top = std::int64_t{1} << (w + 1);
    EXPECT_GE(lo, -(top - 2) / 3) << w;
    EXPECT_LE(hi, (top - 1) / 3) << w;
    EXPECT_EQ(hi, max_positive(w));
    EXPECT_EQ(lo, min_negative(w));
  }
}

TEST(Negabinary, EncodeAgreesWithDivision) {
  for (unsigned w = 1; w <= 14; ++w) {
    for (std::int64_t x = min_negative(w); x <= max_positive(w); ++x) {
      const NegabinaryCode c = encode_negabinary(x, w);
      ASSERT_EQ(c.bits(), encode_by_division(x)) << x;
      ASSERT_EQ(c.width(), w);
    }
    EXPECT_THROW(encode_negabinary(max_positive(w) + 1, w), DomainError);
    EXPECT_THROW(encode_negabinary(min_negative(w) - 1, w), DomainError);
  }
}

TEST(Negabinary, RoundTripAndInjectivity) {
  for (std::uint64_t p = 2; p <= (1U << 16); p *= 2) {
    std::set<std::uint64_t> seen;
    for (Rank r = 0; r < p; ++r) {
      const NegabinaryCode c = rank2nb(r, p);
      ASSERT_EQ(nb2rank(c, p), r);
      ASSERT_TRUE(seen.insert(c.bits()).second) << "p=" << p << " r=" << r;
    }
  }
}

TEST(Negabinary, RanksAboveMaxPositiveWrap) {
  for (std::uint64_t p = 2; p <= 4096; p *= 2) {
    const unsigned s = step_count(p);
    for (Rank r = 0; r < p; ++r) {
      const std::int64_t expected = r <= max_positive(s) ? std::int64_t{r} : std::int64_t{r} - std::int64_t(p);
      ASSERT_EQ(rank2nb(r, p).value(), expected);
    }
  }
}

TEST(Negabinary, MaxPositiveIsLargestNonNegativeRank) {
  for (unsigned s = 1; s <= 14; ++s) {
    const std::uint64_t p = std::uint64_t{1} << s;
    Rank largest = 0;
    for (Rank r = 0; r < p; ++r) {
      if (rank2nb(r, p).value() >= 0) largest = r;
    }
    EXPECT_EQ(std::int64_t{largest}, max_positive(s));
  }
}

TEST(Negabinary, AllOnesXorBasis) {
  for (unsigned s = 1; s <= 12; ++s) {
    std::vector<unsigned> hits(std::size_t{1} << s, 0);
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << s); ++subset) {
      std::uint64_t x = 0;
      for (unsigned k = 0; k < s; ++k) {
        if ((subset >> k) & 1U) x ^= (std::uint64_t{1} << (k + 1)) - 1;
      }
      ++hits[x];
    }
    for (unsigned h : hits) ASSERT_EQ(h, 1U) << s;
  }
}

TEST(Negabinary, RejectsUnsupportedRankCounts) {
  EXPECT_THROW(rank2nb(0, 6), UnsupportedConfiguration);
  EXPECT_THROW(rank2nb(0, 1), UnsupportedConfiguration);
  EXPECT_THROW(rank2nb(8, 8), DomainError);
  EXPECT_THROW(NegabinaryCode(0b1000, 3), DomainError);
  EXPECT_THROW(NegabinaryCode(0, 0), DomainError);
}

TEST(Negabinary, WidthIsPartOfTheValue) {
  EXPECT_FALSE(code("010") == code("0010"));
  EXPECT_EQ(code("010").value(), code("0010").value());
}

TEST(Negabinary, FlipLowBits) {
  EXPECT_EQ(code("1000").flip_low_bits(3).to_string(), "1111");
  EXPECT_EQ(code("0110").flip_low_bits(4).to_string(), "1001");
}

TEST(Bits, ReverseAndDistance) {
  EXPECT_EQ(reverse_bits(0b011, 3), 0b110U);
  EXPECT_EQ(reverse_bits(0b0001, 4), 0b1000U);
  EXPECT_EQ(modulo_distance(0, 7, 8), 1U);
  EXPECT_EQ(modulo_distance(2, 6, 8), 4U);
  EXPECT_EQ(modulo_distance(5, 5, 8), 0U);
}

}  // namespace
}  // namespace bine
