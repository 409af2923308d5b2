#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bhg/varbase.hpp"
#include "oracles.hpp"

using bhg::base_schedule;
using bhg::natural;

TEST(Varbase, FirstBaseIsTwo) {
  for (std::uint64_t l : {2, 3, 8, 64, 1000}) EXPECT_EQ(base_schedule(l).base(1), 2);
}

TEST(Varbase, KnownBasesWindowTwo) {
  const base_schedule s(2);
  const std::vector<std::string> want = {"2", "4", "9", "29", "157", "1985", "88488", "26322575"};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(s.base(i + 1), natural(want[i])) << "i=" << i + 1;
}

TEST(Varbase, FloorMatchesDecimalOracle) {
  for (std::uint64_t l : {2, 3, 8, 64}) {
    const base_schedule s(l);
    for (unsigned i = 1; i <= 12; ++i) {
      const oracle::dec e = oracle::exponential(l, i);
      const oracle::dec fl = boost::multiprecision::floor(e);
      std::string text = fl.str(0, std::ios_base::fixed);
      text = text.substr(0, text.find('.'));
      const natural want(text);
      EXPECT_EQ(s.base(i), want) << "l=" << l << " i=" << i;
    }
  }
}

TEST(Varbase, SandwichAroundExponential) {
  for (std::uint64_t l : {2, 3, 8, 64}) {
    const base_schedule s(l);
    for (unsigned i = 1; i <= 12; ++i) {
      const oracle::dec e = oracle::exponential(l, i);
      const oracle::dec q(s.base(i).str());
      EXPECT_LE(q, e);
      EXPECT_GE(2 * q, e);
    }
  }
}

TEST(Varbase, PrefixProducts) {
  EXPECT_EQ(base_schedule(2).prefix_product(5), 327816);
  EXPECT_EQ(base_schedule(3).prefix_product(5), 655200);
  EXPECT_EQ(base_schedule(2).prefix_product(0), 1);
}

TEST(Varbase, WideWindowReportsFlatSteps) {
  const base_schedule s(64);
  const auto bad = s.monotonicity_violations(12);
  EXPECT_FALSE(bad.empty());
  // 2, 2, 3, 3, 4, 4, ...: q_3 = q_4 and q_5 = q_6.
  EXPECT_NE(std::find(bad.begin(), bad.end(), 3U), bad.end());
  EXPECT_TRUE(base_schedule(2).monotonicity_violations(12).empty());
}

TEST(Varbase, DecodeExamples) {
  const base_schedule s(2);
  EXPECT_TRUE(bhg::decode(s, std::uint64_t{0}).digits().empty());
  EXPECT_EQ(bhg::decode_digits(s, 13), (std::vector<std::uint64_t>{1, 2, 1}));
  EXPECT_EQ(bhg::decode_digits(s, 1), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(bhg::encode(bhg::digit_vector(s, {1, 2, 1})), 13);
  EXPECT_EQ(bhg::encode(bhg::digit_vector(s, {})), 0);
}

TEST(Varbase, EncodeRejectsOversizedDigit) {
  const base_schedule s(2);
  EXPECT_THROW(bhg::encode(bhg::digit_vector(s, {2})), bhg::range_error);
  EXPECT_THROW(bhg::encode(bhg::digit_vector(s, {0, 4})), bhg::range_error);
}

TEST(Varbase, RoundTripAndDigitRanges) {
  for (std::uint64_t l : {2, 3, 8, 64}) {
    const base_schedule s(l);
    for (std::uint64_t x = 0; x <= 20000; ++x) {
      const auto v = bhg::decode(s, x);
      ASSERT_EQ(bhg::encode(v), x);
      for (std::size_t i = 0; i < v.size(); ++i) ASSERT_LT(v.digit(i), s.base(i + 1));
    }
  }
}

TEST(Varbase, RoundTripBeyondSixtyFourBits) {
  const base_schedule s(2);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    natural x = rng();
    x = x * rng() * rng() + rng();
    EXPECT_EQ(bhg::encode(bhg::decode(s, x)), x);
  }
}

TEST(Varbase, DecodeIsInjective) {
  const base_schedule s(3);
  std::set<std::vector<std::uint64_t>> seen;
  for (std::uint64_t x = 0; x < 5000; ++x) EXPECT_TRUE(seen.insert(bhg::decode_digits(s, x)).second);
}

TEST(Varbase, RejectsBadParameters) {
  EXPECT_THROW(base_schedule(1), bhg::domain_error);
  EXPECT_THROW(base_schedule(2, 10), bhg::domain_error);
  EXPECT_THROW(base_schedule(2).base(0), bhg::domain_error);
}

TEST(Varbase, HigherPrecisionAgrees) {
  const base_schedule a(8), b(8, 200);
  for (std::size_t i = 1; i <= 10; ++i) EXPECT_EQ(a.base(i), b.base(i));
}
