#include <gtest/gtest.h>

#include <random>

#include "bhg/explicit.hpp"
#include "bhg/repcount.hpp"
#include "oracles.hpp"

using bhg::explicit_params;
using bhg::natural;

namespace {

/// Membership from first principles: decode by repeated division and check the
/// digit sets and the window directly.
bool member_by_hand(const explicit_params& p, std::uint64_t x) {
  if (x == 0) return false;
  std::vector<std::uint64_t> digits;
  for (std::size_t i = 1; x != 0; ++i) {
    const auto q = p.schedule().base(i).convert_to<std::uint64_t>();
    digits.push_back(x % q);
    x /= q;
  }
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] == 0) continue;
    const auto& set = p.digit_set(i + 1).elements;
    if (std::find(set.begin(), set.end(), digits[i]) == set.end()) return false;
    nonzero.push_back(i);
  }
  return nonzero.back() - nonzero.front() < p.l();
}

}  // namespace

TEST(Explicit, OneIsNotAMember) {
  const explicit_params p(2, 2);
  EXPECT_FALSE(bhg::contains(p, std::uint64_t{1}));
  EXPECT_FALSE(bhg::contains(p, std::uint64_t{0}));
  EXPECT_EQ(p.digit_set(1).elements, std::vector<std::uint64_t>{0});
  EXPECT_TRUE(bhg::enumerate_upto(p, 1).empty());
}

TEST(Explicit, WindowDigitsAreMembers) {
  const explicit_params p(2, 2);
  const auto& sched = p.schedule();
  for (auto a : p.digit_set(2).elements) {
    if (a == 0) continue;
    for (auto c : p.digit_set(3).elements) {
      const natural x = bhg::encode(bhg::digit_vector(sched, {0, a, c}));
      EXPECT_TRUE(bhg::contains(p, x));
    }
  }
}

TEST(Explicit, WideSpanIsRejected) {
  const explicit_params p(2, 2);
  const auto& sched = p.schedule();
  // Nonzero digits at positions 1 and 3 span three positions.
  const std::uint64_t a = p.digit_set(2).elements.back();
  const std::uint64_t c = p.digit_set(4).elements.back();
  ASSERT_GT(a, 0U);
  ASSERT_GT(c, 0U);
  EXPECT_FALSE(bhg::contains(p, bhg::encode(bhg::digit_vector(sched, {0, a, 0, c}))));
}

TEST(Explicit, EnumerationMatchesScan) {
  for (auto [h, l] : std::vector<std::pair<int, std::uint64_t>>{{2, 2}, {2, 3}, {3, 2}, {2, 8}}) {
    const explicit_params p(h, l);
    const std::uint64_t x = 100000;
    const auto seq = bhg::narrow(bhg::enumerate_upto(p, x));
    std::vector<std::uint64_t> want;
    for (std::uint64_t v = 1; v <= x; ++v) {
      if (member_by_hand(p, v)) want.push_back(v);
    }
    EXPECT_EQ(seq.elements(), want) << "h=" << h << " l=" << l;
    EXPECT_LE(bhg::natural(seq.size()), bhg::predicted_count(p, x));
  }
}

TEST(Explicit, MembershipAgreesWithEnumeration) {
  const explicit_params p(2, 3);
  const auto seq = bhg::narrow(bhg::enumerate_upto(p, 50000));
  for (std::uint64_t v = 0; v <= 50000; ++v) ASSERT_EQ(bhg::contains(p, v), seq.contains(v)) << v;
}

TEST(Explicit, MetadataAndOrdering) {
  const explicit_params p(2, 2);
  const auto seq = bhg::enumerate_upto(p, 327816);
  EXPECT_EQ(seq.meta().source, "explicit");
  EXPECT_EQ(seq.meta().h, 2);
  EXPECT_EQ(seq.meta().l, 2U);
  EXPECT_EQ(*seq.meta().N, 327816);
  EXPECT_GE(seq.elements().front(), 1);
}

TEST(Explicit, NoCarryDigitLaw) {
  for (auto [h, l] : std::vector<std::pair<int, std::uint64_t>>{{2, 2}, {3, 2}, {2, 3}}) {
    const explicit_params p(h, l);
    const auto seq = bhg::narrow(bhg::enumerate_upto(p, p.schedule().prefix_product(6)));
    std::mt19937_64 rng(3);
    const auto& sched = p.schedule();
    for (int t = 0; t < 2000; ++t) {
      std::vector<std::uint64_t> digit_sum;
      std::uint64_t total = 0;
      for (int k = 0; k < h; ++k) {
        const std::uint64_t x = seq[rng() % seq.size()];
        total += x;
        const auto d = bhg::decode_digits(sched, x);
        if (digit_sum.size() < d.size()) digit_sum.resize(d.size(), 0);
        for (std::size_t i = 0; i < d.size(); ++i) digit_sum[i] += d[i];
      }
      for (std::size_t i = 0; i < digit_sum.size(); ++i) ASSERT_LT(digit_sum[i], sched.small_base(i + 1));
      auto got = bhg::decode_digits(sched, total);
      while (!digit_sum.empty() && digit_sum.back() == 0) digit_sum.pop_back();
      ASSERT_EQ(got, digit_sum);
    }
  }
}

TEST(Explicit, RepresentationBound) {
  EXPECT_EQ(bhg::rep_bound(2, 2), 16);
  EXPECT_EQ(bhg::rep_bound(3, 2), 46656);
  EXPECT_EQ(bhg::rep_bound(2, 3), 64);
  for (std::uint64_t l : {2, 3}) {
    const explicit_params p(2, l);
    const auto seq = bhg::narrow(bhg::enumerate_upto(p, p.schedule().prefix_product(4)));
    const auto prof = bhg::profile(seq, 2, 2 * seq.elements().back());
    EXPECT_LE(bhg::natural(prof.max_count()), bhg::rep_bound(2, l));
  }
}

TEST(Explicit, WindowCount) {
  const explicit_params p(2, 2);
  EXPECT_EQ(bhg::window_count(p, 3), p.digit_set(2).size() * p.digit_set(3).size());
  EXPECT_EQ(bhg::window_count(p, 4), p.digit_set(3).size() * p.digit_set(4).size());
  EXPECT_EQ(bhg::window_count(p, 2), p.digit_set(1).size() * p.digit_set(2).size());
  EXPECT_THROW(bhg::window_count(p, 1), bhg::domain_error);
  for (std::size_t j = 2; j <= 5; ++j) {
    const auto seq = bhg::enumerate_upto(p, p.schedule().prefix_product(j));
    EXPECT_LE(bhg::window_count(p, j) - 1, natural(seq.size()));
  }
}

TEST(Explicit, DiagnosticsThresholds) {
  const auto wide = bhg::diagnostics(2, 64, 200);
  EXPECT_DOUBLE_EQ(wide.threshold, 0.71875);
  const auto narrow = bhg::diagnostics(2, 2, 2);
  EXPECT_DOUBLE_EQ(narrow.threshold, -0.5);
  EXPECT_TRUE(narrow.flag || narrow.ratio < narrow.threshold);
  const auto eight = bhg::diagnostics(2, 8, 40);
  EXPECT_TRUE(eight.flag);
  EXPECT_GT(eight.ratio, eight.threshold);
  EXPECT_THROW(bhg::diagnostics(2, 8, 7), bhg::domain_error);
}

TEST(Explicit, BudgetIsEnforced) {
  const explicit_params p(2, 2);
  EXPECT_THROW(bhg::enumerate_upto(p, p.schedule().prefix_product(8), 10), bhg::budget_error);
}
