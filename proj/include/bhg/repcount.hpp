#pragma once

// r_{h,A}(n): the number of nondecreasing h-tuples of elements of A (with
// repetition) summing to n.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "bhg/errors.hpp"
#include "bhg/sequence.hpp"

namespace bhg {

/// Nondecreasing h-tuples, lexicographically sorted.
using tuple_list = std::vector<std::vector<std::uint64_t>>;

struct rep_count {
  std::uint64_t count = 0;
  std::optional<tuple_list> tuples;
};

namespace detail {

inline void require_order(int h) {
  if (h < 2) throw domain_error("order h must be >= 2");
}

/// Visits every nondecreasing h-tuple of `a` (sorted) with sum n, tuples in
/// lexicographic order. visit(const std::vector<std::uint64_t>&) -> void.
template <class Visit>
void for_each_representation(std::span<const std::uint64_t> a, int h, std::uint64_t n, Visit&& visit) {
  if (a.empty()) return;
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(h));
  const std::uint64_t top = a.back();
  auto go = [&](auto&& self, std::size_t pos, std::size_t start, std::uint64_t remaining) -> void {
    const std::uint64_t parts = static_cast<std::uint64_t>(h) - pos;
    if (parts == 1) {
      auto it = std::lower_bound(a.begin() + static_cast<std::ptrdiff_t>(start), a.end(), remaining);
      if (it != a.end() && *it == remaining) {
        tuple[pos] = remaining;
        visit(static_cast<const std::vector<std::uint64_t>&>(tuple));
      }
      return;
    }
    for (std::size_t i = start; i < a.size(); ++i) {
      const std::uint64_t v = a[i];
      if (v > remaining / parts) break;  // v * parts > remaining
      const std::uint64_t rest = remaining - v;
      if (rest > (parts - 1) * top) continue;
      tuple[pos] = v;
      self(self, pos + 1, i, rest);
    }
  };
  go(go, 0, 0, n);
}

}  // namespace detail

inline rep_count count_reps(std::span<const std::uint64_t> a, int h, std::uint64_t n, bool with_list = false) {
  detail::require_order(h);
  rep_count out;
  if (with_list) out.tuples.emplace();
  detail::for_each_representation(a, h, n, [&](const std::vector<std::uint64_t>& t) {
    ++out.count;
    if (with_list) out.tuples->push_back(t);
  });
  return out;
}

inline rep_count count_reps(const sequence& a, int h, std::uint64_t n, bool with_list = false) {
  return count_reps(std::span<const std::uint64_t>(a.elements()), h, n, with_list);
}

/// Sparse map n -> r_{h,A}(n) for n <= N; absent keys are zero.
class rep_profile {
 public:
  rep_profile() = default;
  rep_profile(int h, std::uint64_t N, std::vector<std::pair<std::uint64_t, std::uint64_t>> counts)
      : h_(h), N_(N), counts_(std::move(counts)) {}

  int h() const { return h_; }
  std::uint64_t N() const { return N_; }

  std::uint64_t at(std::uint64_t n) const {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), n,
                               [](const auto& entry, std::uint64_t key) { return entry.first < key; });
    return it != counts_.end() && it->first == n ? it->second : 0;
  }

  /// Nonzero (n, count) pairs in increasing n.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& nonzero() const { return counts_; }

  std::uint64_t max_count() const {
    std::uint64_t best = 0;
    for (const auto& [n, c] : counts_) best = std::max(best, c);
    return best;
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [n, c] : counts_) s += c;
    return s;
  }

  friend bool operator==(const rep_profile&, const rep_profile&) = default;

 private:
  int h_ = 2;
  std::uint64_t N_ = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts_;
};

enum class profile_method { automatic, dynamic_programming, enumeration };

/// DP table cells / enumerated multisets accepted by profile().
inline constexpr double profile_budget = 4e8;

namespace detail {

inline double multiset_count(std::size_t size, int h) {
  double c = 1.0;
  for (int k = 1; k <= h; ++k) c = c * static_cast<double>(size + static_cast<std::size_t>(k) - 1) / k;
  return c;
}

inline rep_profile profile_dp(std::span<const std::uint64_t> a, int h, std::uint64_t N) {
  const auto hh = static_cast<std::size_t>(h);
  // dp[k][s]: k-multisets of the processed prefix with sum s. Updating k in
  // increasing order lets the current element repeat.
  std::vector<std::vector<std::uint64_t>> dp(hh + 1, std::vector<std::uint64_t>(N + 1, 0));
  dp[0][0] = 1;
  for (std::uint64_t v : a) {
    for (std::size_t k = 1; k <= hh; ++k) {
      const auto& lower = dp[k - 1];
      auto& row = dp[k];
      for (std::uint64_t s = v; s <= N; ++s) row[s] += lower[s - v];
    }
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
  for (std::uint64_t s = 0; s <= N; ++s) {
    if (dp[hh][s] != 0) counts.emplace_back(s, dp[hh][s]);
  }
  return {h, N, std::move(counts)};
}

inline rep_profile profile_enumerate(std::span<const std::uint64_t> a, int h, std::uint64_t N) {
  const auto hh = static_cast<std::size_t>(h);
  const bool dense = N < (std::uint64_t{1} << 25);
  std::vector<std::uint64_t> table(dense ? N + 1 : 0, 0);
  std::vector<std::uint64_t> sums;
  auto go = [&](auto&& self, std::size_t pos, std::size_t start, std::uint64_t partial) -> void {
    const std::uint64_t parts = hh - pos;
    for (std::size_t i = start; i < a.size(); ++i) {
      const std::uint64_t v = a[i];
      if (v > (N - partial) / parts) break;  // partial + parts * v > N
      if (parts == 1) {
        if (dense) {
          ++table[partial + v];
        } else {
          sums.push_back(partial + v);
        }
      } else {
        self(self, pos + 1, i, partial + v);
      }
    }
  };
  go(go, 0, 0, 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
  if (dense) {
    for (std::uint64_t s = 0; s <= N; ++s) {
      if (table[s] != 0) counts.emplace_back(s, table[s]);
    }
  } else {
    std::sort(sums.begin(), sums.end());
    for (std::size_t i = 0; i < sums.size();) {
      std::size_t j = i;
      while (j < sums.size() && sums[j] == sums[i]) ++j;
      counts.emplace_back(sums[i], j - i);
      i = j;
    }
  }
  return {h, N, std::move(counts)};
}

}  // namespace detail

/// All counts r_{h,A}(n), n <= N. Only elements <= N can occur, so the result
/// is exact for A truncated at N.
inline rep_profile profile(std::span<const std::uint64_t> a, int h, std::uint64_t N,
                           profile_method method = profile_method::automatic) {
  detail::require_order(h);
  auto last = std::upper_bound(a.begin(), a.end(), N);
  std::span<const std::uint64_t> used(a.begin(), last);
  if (used.empty()) return {h, N, {}};

  const double dp_work = static_cast<double>(used.size()) * h * (static_cast<double>(N) + 1);
  const double enum_work = detail::multiset_count(used.size(), h);
  if (method == profile_method::automatic) {
    method = enum_work <= dp_work ? profile_method::enumeration : profile_method::dynamic_programming;
  }
  if (method == profile_method::dynamic_programming) {
    if ((static_cast<double>(h) + 1) * (static_cast<double>(N) + 1) > profile_budget || dp_work > 50 * profile_budget) {
      throw budget_error("profile: dynamic-programming table exceeds budget");
    }
    return detail::profile_dp(used, h, N);
  }
  if (enum_work > 50 * profile_budget) throw budget_error("profile: multiset enumeration exceeds budget");
  return detail::profile_enumerate(used, h, N);
}

inline rep_profile profile(const sequence& a, int h, std::uint64_t N,
                           profile_method method = profile_method::automatic) {
  return profile(std::span<const std::uint64_t>(a.elements()), h, N, method);
}

struct bhg_check {
  bool holds = true;
  std::uint64_t max_count = 0;
  std::optional<std::uint64_t> witness;  // smallest n with r_{h,A}(n) > g
  tuple_list witness_tuples;
};

inline bhg_check is_bhg(const sequence& a, int h, std::uint64_t g, std::uint64_t N) {
  detail::require_order(h);
  if (g < 1) throw domain_error("g must be >= 1");
  const rep_profile prof = profile(a, h, N);
  bhg_check out;
  out.max_count = prof.max_count();
  for (const auto& [n, c] : prof.nonzero()) {
    if (c > g) {
      out.holds = false;
      out.witness = n;
      out.witness_tuples = *count_reps(a, h, n, true).tuples;
      break;
    }
  }
  return out;
}

/// `# bhgprof v1 h=<h> N=<N>` then `n,count` rows for nonzero counts.
inline void write_profile_csv(std::ostream& os, const rep_profile& prof) {
  os << "# bhgprof v1 h=" << prof.h() << " N=" << prof.N() << '\n';
  for (const auto& [n, c] : prof.nonzero()) os << n << ',' << c << '\n';
}

}  // namespace bhg
