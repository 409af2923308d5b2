#pragma once

// Disjoint representations and the alteration step.
//
// r*_{h,A}(n) is the largest number of representations of n whose value sets
// are pairwise disjoint. An element x in A is (g+1)_h-bad when it is the
// largest entry of a representation of some n with r_{h,A}(n) >= g+1 (plain)
// or r*_{h,A}(n) >= g+1 (star). Deleting every bad element yields a B_h[g]
// (resp. B*_h[g]) truncation.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "bhg/detail/parallel.hpp"
#include "bhg/errors.hpp"
#include "bhg/repcount.hpp"
#include "bhg/sequence.hpp"

namespace bhg {

/// Largest representation list disjoint_count() will pack.
inline constexpr std::size_t packing_cap = 10'000;

namespace detail {

class bitset {
 public:
  explicit bitset(std::size_t bits = 0) : bits_(bits), words_((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  /// Index of the lowest set bit, or size() when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return bits_;
  }
  std::size_t next(std::size_t i) const {
    ++i;
    if (i >= bits_) return bits_;
    std::size_t w = i / 64;
    std::uint64_t word = words_[w] & (~std::uint64_t{0} << (i % 64));
    while (true) {
      if (word != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      if (++w == words_.size()) return bits_;
      word = words_[w];
    }
  }
  bitset& subtract(const bitset& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
    return *this;
  }
  std::size_t size() const { return bits_; }

 private:
  std::size_t bits_;
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// Exact maximum set packing by branch and bound: returns indices of a
/// largest family of pairwise disjoint sets. Sets are sorted value lists.
///
/// Sets are tried from the smallest, with a greedy packing as the first
/// incumbent. Each node branches on the value held by the fewest remaining
/// sets: one child per such set, plus one child where the value stays unused.
/// Sets sharing a value pairwise conflict, so any cover of the candidates by
/// values bounds the packing; the bound is the smaller of the distinct-maximum
/// count and a greedy cover.
///
/// With `target` set, the search stops as soon as a packing of that size is
/// found (enough to decide r* >= target).
inline std::vector<std::size_t> max_set_packing(const std::vector<std::vector<std::uint64_t>>& sets,
                                                std::size_t target = SIZE_MAX) {
  const std::size_t count = sets.size();
  if (count == 0) return {};

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sets[a].size() < sets[b].size(); });

  // Positions index `order`; values are renamed 0 .. distinct-1.
  std::unordered_map<std::uint64_t, std::size_t> rename;
  std::vector<std::vector<std::size_t>> members(count);
  std::vector<std::vector<std::size_t>> holders;
  for (std::size_t pos = 0; pos < count; ++pos) {
    for (std::uint64_t v : sets[order[pos]]) {
      auto [it, fresh] = rename.try_emplace(v, holders.size());
      if (fresh) holders.emplace_back();
      holders[it->second].push_back(pos);
      members[pos].push_back(it->second);
    }
  }
  const std::size_t values = holders.size();
  std::vector<detail::bitset> holder_bits(values, detail::bitset(count));
  for (std::size_t v = 0; v < values; ++v) {
    for (std::size_t pos : holders[v]) holder_bits[v].set(pos);
  }
  std::vector<detail::bitset> conflicts(count, detail::bitset(count));
  for (std::size_t pos = 0; pos < count; ++pos) {
    for (std::size_t v : members[pos]) {
      for (std::size_t q : holders[v]) conflicts[pos].set(q);
    }
  }
  std::vector<std::size_t> top(count);
  for (std::size_t pos = 0; pos < count; ++pos) top[pos] = rename.at(sets[order[pos]].back());

  std::vector<std::size_t> best;
  {
    detail::bitset blocked(count);
    for (std::size_t pos = 0; pos < count; ++pos) {
      if (blocked.test(pos)) continue;
      best.push_back(pos);
      for (std::size_t q = conflicts[pos].first(); q < count; q = conflicts[pos].next(q)) blocked.set(q);
    }
  }

  std::vector<std::size_t> tally(values, 0);
  std::vector<std::size_t> touched;
  std::vector<char> seen(values, 0);
  // Greedy cover of the candidates by values, stopping once it cannot prune.
  auto cover_bound = [&](const detail::bitset& cand, std::size_t give_up) {
    detail::bitset left = cand;
    std::size_t used = 0;
    while (!left.none()) {
      if (used >= give_up) return used;
      touched.clear();
      for (std::size_t q = left.first(); q < count; q = left.next(q)) {
        for (std::size_t v : members[q]) {
          if (tally[v]++ == 0) touched.push_back(v);
        }
      }
      std::size_t pick = touched.front();
      for (std::size_t v : touched) {
        if (tally[v] > tally[pick]) pick = v;
      }
      for (std::size_t v : touched) tally[v] = 0;
      left.subtract(holder_bits[pick]);
      ++used;
    }
    return used;
  };

  std::vector<std::size_t> current;
  auto search = [&](auto&& self, const detail::bitset& cand) -> void {
    if (current.size() > best.size()) best = current;
    if (best.size() >= target || cand.none()) return;
    // Cheap bound first: distinct largest values.
    touched.clear();
    for (std::size_t q = cand.first(); q < count; q = cand.next(q)) {
      if (!seen[top[q]]) {
        seen[top[q]] = 1;
        touched.push_back(top[q]);
      }
    }
    const std::size_t cheap = touched.size();
    for (std::size_t v : touched) seen[v] = 0;
    if (current.size() + cheap <= best.size()) return;
    const std::size_t room = best.size() - current.size();
    if (cover_bound(cand, room + 1) <= room) return;

    // Branch on the rarest value among the candidates.
    touched.clear();
    for (std::size_t q = cand.first(); q < count; q = cand.next(q)) {
      for (std::size_t v : members[q]) {
        if (tally[v]++ == 0) touched.push_back(v);
      }
    }
    std::size_t pivot = touched.front();
    for (std::size_t v : touched) {
      if (tally[v] < tally[pivot] || (tally[v] == tally[pivot] && v < pivot)) pivot = v;
    }
    for (std::size_t v : touched) tally[v] = 0;

    for (std::size_t q : holders[pivot]) {
      if (!cand.test(q)) continue;
      detail::bitset with = cand;
      with.subtract(conflicts[q]);
      current.push_back(q);
      self(self, with);
      current.pop_back();
      if (best.size() >= target) return;
    }
    detail::bitset without = cand;
    without.subtract(holder_bits[pivot]);
    self(self, without);
  };
  if (best.size() < target) {
    detail::bitset all(count);
    for (std::size_t pos = 0; pos < count; ++pos) all.set(pos);
    search(search, all);
  }

  std::vector<std::size_t> out;
  out.reserve(best.size());
  for (std::size_t pos : best) out.push_back(order[pos]);
  std::sort(out.begin(), out.end());
  return out;
}

/// Distinct values of a representation: the tuple (3, 3) has value set {3}.
inline std::vector<std::uint64_t> value_set(const std::vector<std::uint64_t>& tuple) {
  std::vector<std::uint64_t> s(tuple);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// A largest family of pairwise disjoint representations of n.
inline tuple_list disjoint_packing(std::span<const std::uint64_t> a, int h, std::uint64_t n,
                                   std::size_t cap = packing_cap) {
  const rep_count reps = count_reps(a, h, n, true);
  if (reps.count > cap) {
    throw budget_error("disjoint_count: " + std::to_string(reps.count) + " representations exceed the packing cap");
  }
  std::vector<std::vector<std::uint64_t>> sets;
  sets.reserve(reps.tuples->size());
  for (const auto& t : *reps.tuples) sets.push_back(value_set(t));
  tuple_list out;
  for (std::size_t i : max_set_packing(sets)) out.push_back((*reps.tuples)[i]);
  return out;
}

/// r*_{h,A}(n).
inline std::uint64_t disjoint_count(std::span<const std::uint64_t> a, int h, std::uint64_t n,
                                    std::size_t cap = packing_cap) {
  return disjoint_packing(a, h, n, cap).size();
}

inline std::uint64_t disjoint_count(const sequence& a, int h, std::uint64_t n, std::size_t cap = packing_cap) {
  return disjoint_count(std::span<const std::uint64_t>(a.elements()), h, n, cap);
}

/// Decides r*_{h,A}(n) >= k without finishing the search once k is reached.
inline bool disjoint_at_least(std::span<const std::uint64_t> a, int h, std::uint64_t n, std::uint64_t k,
                              std::size_t cap = packing_cap) {
  if (k == 0) return true;
  const rep_count reps = count_reps(a, h, n, true);
  if (reps.count < k) return false;
  if (reps.count > cap) {
    throw budget_error("disjoint_at_least: " + std::to_string(reps.count) + " representations exceed the packing cap");
  }
  std::vector<std::vector<std::uint64_t>> sets;
  sets.reserve(reps.tuples->size());
  for (const auto& t : *reps.tuples) sets.push_back(value_set(t));
  return max_set_packing(sets, k).size() >= k;
}

inline bool disjoint_at_least(const sequence& a, int h, std::uint64_t n, std::uint64_t k,
                              std::size_t cap = packing_cap) {
  return disjoint_at_least(std::span<const std::uint64_t>(a.elements()), h, n, k, cap);
}

enum class badness { plain, star };

inline std::string to_string(badness b) { return b == badness::plain ? "plain" : "star"; }

/// Bad elements and population of one block [h^k, h^{k+1}) ∩ [1, N].
struct block_stat {
  unsigned k = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;  // exclusive
  std::uint64_t bad = 0;
  std::uint64_t population = 0;
};

struct bad_report {
  int h = 2;
  std::uint64_t g = 1;
  badness variant = badness::plain;
  std::uint64_t N = 0;
  std::vector<std::uint64_t> bad;       // sorted
  std::vector<block_stat> blocks;       // k = 0, 1, ... while h^k <= N
  sequence pruned;                      // A without `bad`
  std::uint64_t original_count = 0;
  std::uint64_t violating_sums = 0;     // n with r (or r*) >= g+1
};

namespace detail {

inline std::vector<block_stat> block_stats(std::span<const std::uint64_t> elements,
                                           std::span<const std::uint64_t> bad, int h, std::uint64_t N) {
  std::vector<block_stat> out;
  const auto hh = static_cast<std::uint64_t>(h);
  std::uint64_t lo = 1;
  for (unsigned k = 0; lo <= N; ++k) {
    const std::uint64_t hi = lo > UINT64_MAX / hh ? UINT64_MAX : lo * hh;
    const std::uint64_t top = std::min(hi - 1, N);
    auto count_in = [&](std::span<const std::uint64_t> s) {
      return static_cast<std::uint64_t>(std::upper_bound(s.begin(), s.end(), top) -
                                        std::lower_bound(s.begin(), s.end(), lo));
    };
    out.push_back({k, lo, hi, count_in(bad), count_in(elements)});
    if (hi == UINT64_MAX) break;
    lo = hi;
  }
  return out;
}

}  // namespace detail

/// A without the elements listed in `report.bad`.
inline sequence prune(const sequence& a, const bad_report& report) {
  std::vector<std::uint64_t> kept;
  kept.reserve(a.size());
  std::set_difference(a.begin(), a.end(), report.bad.begin(), report.bad.end(), std::back_inserter(kept));
  sequence_meta meta = a.meta();
  meta.source = "pruned";
  if (!meta.h) meta.h = report.h;
  return sequence(std::move(kept), std::move(meta));
}

/// Bad elements of A ∩ [0, N], scanning every n <= h N. The truncated
/// sequence is treated as the whole sequence.
inline bad_report bad_elements(const sequence& a, int h, std::uint64_t g, std::uint64_t N, badness variant,
                               unsigned threads = 1) {
  detail::require_order(h);
  if (g < 1) throw domain_error("g must be >= 1");
  auto last = std::upper_bound(a.begin(), a.end(), N);
  const std::vector<std::uint64_t> used(a.begin(), last);
  const std::uint64_t span_top = N > UINT64_MAX / static_cast<std::uint64_t>(h) ? UINT64_MAX : N * h;

  const rep_profile prof = profile(used, h, span_top);
  std::vector<std::uint64_t> candidates;
  for (const auto& [n, c] : prof.nonzero()) {
    if (c >= g + 1) candidates.push_back(n);
  }

  struct partial {
    std::vector<std::uint64_t> bad;
    std::uint64_t violating = 0;
  };
  auto parts = detail::parallel_ranges(candidates.size(), threads, [&](std::uint64_t begin, std::uint64_t end) {
    partial p;
    for (std::uint64_t c = begin; c < end; ++c) {
      const std::uint64_t n = candidates[c];
      const rep_count reps = count_reps(used, h, n, true);
      if (variant == badness::star) {
        if (reps.count > packing_cap) throw budget_error("bad_elements: representation list exceeds the packing cap");
        std::vector<std::vector<std::uint64_t>> sets;
        for (const auto& t : *reps.tuples) sets.push_back(value_set(t));
        if (max_set_packing(sets, g + 1).size() < g + 1) continue;
      }
      ++p.violating;
      for (const auto& t : *reps.tuples) p.bad.push_back(t.back());
    }
    return p;
  });

  bad_report out;
  out.h = h;
  out.g = g;
  out.variant = variant;
  out.N = N;
  out.original_count = a.size();
  for (auto& p : parts) {
    out.bad.insert(out.bad.end(), p.bad.begin(), p.bad.end());
    out.violating_sums += p.violating;
  }
  std::sort(out.bad.begin(), out.bad.end());
  out.bad.erase(std::unique(out.bad.begin(), out.bad.end()), out.bad.end());
  out.blocks = detail::block_stats(used, out.bad, h, N);
  out.pruned = prune(a, out);
  return out;
}

/// Union of two reports' bad sets (used by the two-stage alteration).
inline std::vector<std::uint64_t> merge_bad(const bad_report& a, const bad_report& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.bad.begin(), a.bad.end(), b.bad.begin(), b.bad.end(), std::back_inserter(out));
  return out;
}

}  // namespace bhg
