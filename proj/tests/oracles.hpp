#pragma once

// Slow, obviously-correct reference implementations used as test oracles.
// None of them share code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using u64 = std::uint64_t;
using tuple = std::vector<u64>;

/// All nondecreasing h-tuples of elements of `a` (any order, no duplicates)
/// summing to n, by plain recursion over indices of the sorted copy.
inline std::vector<tuple> reps(std::vector<u64> a, int h, u64 n) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::vector<tuple> out;
  tuple cur;
  auto go = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(cur.size()) == h) {
      u64 s = 0;
      for (u64 v : cur) s += v;
      if (s == n) out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < a.size(); ++i) {
      cur.push_back(a[i]);
      self(self, i);
      cur.pop_back();
    }
  };
  go(go, 0);
  return out;
}

/// n -> every representation of n, for all n at once.
inline std::map<u64, std::vector<tuple>> all_reps(std::vector<u64> a, int h) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::map<u64, std::vector<tuple>> out;
  tuple cur;
  auto go = [&](auto&& self, std::size_t from, u64 s) -> void {
    if (static_cast<int>(cur.size()) == h) {
      out[s].push_back(cur);
      return;
    }
    for (std::size_t i = from; i < a.size(); ++i) {
      cur.push_back(a[i]);
      self(self, i, s + a[i]);
      cur.pop_back();
    }
  };
  go(go, 0, 0);
  return out;
}

/// n -> number of h-multisets of `a` with sum n (all n).
inline std::map<u64, u64> sum_histogram(std::vector<u64> a, int h) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::map<u64, u64> out;
  tuple cur;
  auto go = [&](auto&& self, std::size_t from, u64 s) -> void {
    if (static_cast<int>(cur.size()) == h) {
      ++out[s];
      return;
    }
    for (std::size_t i = from; i < a.size(); ++i) {
      cur.push_back(a[i]);
      self(self, i, s + a[i]);
      cur.pop_back();
    }
  };
  go(go, 0, 0);
  return out;
}

inline bool is_bh1(const std::vector<u64>& a, int h) {
  for (const auto& [n, c] : sum_histogram(a, h)) {
    if (c > 1) return false;
  }
  return true;
}

/// Largest number of pairwise disjoint value sets, by trying every subset.
inline std::size_t exhaustive_packing(const std::vector<tuple>& tuples) {
  const std::size_t k = tuples.size();
  std::vector<std::set<u64>> sets;
  for (const auto& t : tuples) sets.emplace_back(t.begin(), t.end());
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::set<u64> used;
    bool ok = true;
    std::size_t count = 0;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if (!((mask >> i) & 1U)) continue;
      for (u64 v : sets[i]) {
        if (!used.insert(v).second) {
          ok = false;
          break;
        }
      }
      ++count;
    }
    if (ok) best = std::max(best, count);
  }
  return best;
}

/// floor(e^{(1+r)^{i-1}}) with r = log2(l)/l in 100-digit decimal floating point.
using dec = boost::multiprecision::cpp_dec_float_100;

inline dec exponential(u64 l, unsigned i) {
  const dec ld(l);
  const dec r = boost::multiprecision::log(ld) / (boost::multiprecision::log(dec(2)) * ld);
  return boost::multiprecision::exp(boost::multiprecision::pow(1 + r, static_cast<int>(i) - 1));
}

/// E r_h(n) under inclusion probability x^{-alpha} for x >= m, enumerating the
/// multisets from the largest entry down and grouping equal values.
inline double expected_reps(double alpha, u64 m, int h, u64 n) {
  long double total = 0;
  std::vector<u64> cur;
  auto go = [&](auto&& self, u64 remaining, u64 most) -> void {
    if (static_cast<int>(cur.size()) == h) {
      if (remaining != 0) return;
      std::set<u64> distinct(cur.begin(), cur.end());
      long double w = 1;
      for (u64 v : distinct) w *= std::pow(static_cast<long double>(v), -static_cast<long double>(alpha));
      total += w;
      return;
    }
    for (u64 v = std::min(most, remaining); v >= m; --v) {
      cur.push_back(v);
      self(self, remaining - v, v);
      cur.pop_back();
      if (v == 0) break;
    }
  };
  go(go, n, n);
  return static_cast<double>(total);
}

}  // namespace oracle
