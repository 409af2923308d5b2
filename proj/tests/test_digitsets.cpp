#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bhg/digitsets.hpp"
#include "bhg/varbase.hpp"
#include "oracles.hpp"

using bhg::bh1_set;
using E = std::vector<std::uint64_t>;

TEST(Digitsets, GreedyExamples) {
  EXPECT_EQ(bhg::greedy_bh1(2, 1).elements, E{0});
  EXPECT_EQ(bhg::greedy_bh1(2, 2).elements, (E{0, 1}));
  EXPECT_EQ(bhg::greedy_bh1(2, 100).elements, (E{0, 1, 3, 7, 12, 20, 30, 44, 65, 80, 96}));
  EXPECT_EQ(bhg::greedy_bh1(3, 14).elements, (E{0, 1, 4, 13}));
}

TEST(Digitsets, GreedyIsMaximal) {
  for (int h : {2, 3, 4}) {
    for (std::uint64_t limit : {10, 57, 200}) {
      const auto s = bhg::greedy_bh1(h, limit);
      ASSERT_TRUE(oracle::is_bh1(s.elements, h));
      for (std::uint64_t z = 0; z < limit; ++z) {
        if (s.contains(z)) continue;
        E bigger = s.elements;
        bigger.push_back(z);
        EXPECT_FALSE(oracle::is_bh1(bigger, h)) << "h=" << h << " z=" << z;
      }
    }
  }
}

TEST(Digitsets, VerifyExamples) {
  EXPECT_TRUE(bhg::verify_bh1(E{0}, 2));
  EXPECT_TRUE(bhg::verify_bh1(E{0}, 5));
  EXPECT_FALSE(bhg::verify_bh1(E{0, 1, 2}, 2));
  EXPECT_TRUE(bhg::verify_bh1(E{0, 1, 3}, 2));
}

TEST(Digitsets, VerifyAgreesWithOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const int h = 2 + static_cast<int>(rng() % 3);
    E s;
    for (int k = 0; k < 6; ++k) s.push_back(rng() % 60);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    EXPECT_EQ(bhg::verify_bh1(s, h), oracle::is_bh1(s, h));
  }
}

TEST(Digitsets, BoseChowlaSizesAndRange) {
  struct probe { int h; std::uint64_t p; };
  for (auto [h, p] : std::vector<probe>{{2, 2}, {2, 3}, {2, 5}, {2, 7}, {2, 31}, {3, 2}, {3, 3}, {3, 5}, {4, 3}, {2, 101}}) {
    const bh1_set s = bhg::bose_chowla(h, p);
    const auto q = static_cast<std::uint64_t>(std::pow(p, h));
    EXPECT_EQ(s.size(), p) << "h=" << h << " p=" << p;
    EXPECT_EQ(s.elements.front(), 0U);
    EXPECT_LE(s.elements.back(), q - 2);
    EXPECT_TRUE(oracle::is_bh1(s.elements, h)) << "h=" << h << " p=" << p;
  }
}

TEST(Digitsets, BoseChowlaErrors) {
  EXPECT_THROW(bhg::bose_chowla(2, 4), bhg::domain_error);
  EXPECT_THROW(bhg::bose_chowla(2, 1), bhg::domain_error);
  EXPECT_THROW(bhg::bose_chowla(3, 1009), bhg::budget_error);
}

TEST(Digitsets, DigitSetForBaseExamples) {
  EXPECT_EQ(bhg::digit_set_for_base(2, 2).elements, E{0});
  const auto nine = bhg::digit_set_for_base(2, 9);
  EXPECT_GE(nine.size(), 2U);
  EXPECT_LE(nine.elements.back(), 4U);
  const auto twenty_nine = bhg::digit_set_for_base(2, 29);
  EXPECT_GE(twenty_nine.size(), 3U);
  EXPECT_LE(twenty_nine.elements.back(), 14U);
}

TEST(Digitsets, GeneratedSetsForScheduleBases) {
  for (std::uint64_t l : {2, 3, 8}) {
    const bhg::base_schedule sched(l);
    for (int h : {2, 3}) {
      for (std::size_t i = 1; i <= 7; ++i) {
        const auto& q = sched.base(i);
        const bh1_set s = bhg::digit_set_for_base(h, q);
        // ceil(q/h) - 1 is the largest admissible digit.
        const bhg::natural top = (q + h - 1) / h - 1;
        ASSERT_FALSE(s.elements.empty());
        EXPECT_EQ(s.elements.front(), 0U);
        EXPECT_LE(bhg::natural(s.elements.back()), top);
        EXPECT_TRUE(bhg::verify_bh1(s));
        if (s.source == bhg::digit_set_source::bose_chowla) {
          const double qd = q.convert_to<double>();
          EXPECT_GT(static_cast<double>(s.size()), 0.5 * std::pow(qd / h, 1.0 / h));
        }
      }
    }
  }
}

TEST(Digitsets, ExtendKeepsPropertyAndGrows) {
  const auto base = bhg::bose_chowla(2, 7);
  const auto ext = bhg::extend_greedy(base, 60);
  EXPECT_GE(ext.size(), base.size());
  EXPECT_TRUE(oracle::is_bh1(ext.elements, 2));
  for (auto v : base.elements) EXPECT_TRUE(ext.contains(v));
}
