#pragma once

// The random model S(alpha, m): every x >= m is in A independently with
// probability x^{-alpha}; nothing below m is.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bhg/detail/parallel.hpp"
#include "bhg/errors.hpp"
#include "bhg/sequence.hpp"

namespace bhg {

struct random_model {
  double alpha = 0.5;
  std::uint64_t m = 1;
  std::uint64_t seed = 0;

  random_model() = default;
  random_model(double alpha_, std::uint64_t m_, std::uint64_t seed_ = 0) : alpha(alpha_), m(m_), seed(seed_) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
    if (m < 1) throw domain_error("cutoff m must be >= 1");
  }
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

/// Neumaier-compensated running sum.
class compensated_sum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

}  // namespace detail

/// Keyed uniform in [0, 1): a pure function of (seed, x), so membership never
/// depends on evaluation order.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t x) {
  const std::uint64_t key = detail::splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t v = detail::splitmix64(key ^ detail::splitmix64(x));
  return static_cast<double>(detail::splitmix64(v + key) >> 11U) * 0x1.0p-53;
}

inline double inclusion_probability(const random_model& model, std::uint64_t x) {
  if (x < model.m) return 0.0;
  return std::pow(static_cast<double>(x), -model.alpha);
}

inline bool sampled(const random_model& model, std::uint64_t x) {
  return x >= model.m && keyed_uniform(model.seed, x) < inclusion_probability(model, x);
}

/// { x in [m, N] : U(seed, x) < x^{-alpha} }.
inline sequence sample(const random_model& model, std::uint64_t N, unsigned threads = 1) {
  if (N < 1) throw domain_error("sample: N must be >= 1");
  sequence_meta meta;
  meta.source = "random";
  meta.alpha = model.alpha;
  meta.m = model.m;
  meta.seed = model.seed;
  meta.N = natural(N);
  if (model.m > N) return sequence({}, std::move(meta));

  const std::uint64_t lo = model.m;
  const std::uint64_t count = N - lo + 1;
  auto chunks = detail::parallel_ranges(count, threads, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> part;
    for (std::uint64_t off = begin; off < end; ++off) {
      if (sampled(model, lo + off)) part.push_back(lo + off);
    }
    return part;
  });
  std::vector<std::uint64_t> out;
  for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return sequence(std::move(out), std::move(meta));
}

/// |R_h(n)|: partitions of n into exactly h positive parts (saturating).
inline std::uint64_t partition_count(int h, std::uint64_t n) {
  if (h < 1) return 0;
  const auto hh = static_cast<std::size_t>(h);
  if (n < hh) return 0;
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  // Compositions / h! bound the count from below; skip the table when huge.
  double lower = 1.0;
  for (std::size_t k = 1; k < hh; ++k) lower *= static_cast<double>(n - k) / static_cast<double>(k);
  for (std::size_t k = 2; k <= hh; ++k) lower /= static_cast<double>(k);
  if (lower > 1e12) return top;
  // p[k][s]: partitions of s into exactly k parts; p(s,k) = p(s-1,k-1) + p(s-k,k).
  std::vector<std::vector<std::uint64_t>> p(hh + 1, std::vector<std::uint64_t>(n + 1, 0));
  p[0][0] = 1;
  for (std::uint64_t s = 1; s <= n; ++s) {
    for (std::size_t k = 1; k <= std::min<std::uint64_t>(hh, s); ++k) {
      const std::uint64_t a = p[k - 1][s - 1];
      const std::uint64_t b = s >= k ? p[k][s - k] : 0;
      p[k][s] = a > top - b ? top : a + b;
    }
  }
  return p[hh][n];
}

/// Largest |R_h(n)| accepted by exact_expected_reps.
inline constexpr std::uint64_t expectation_cap = 10'000'000;

/// E r_{h,A}(n) = sum over nondecreasing h-tuples x of n of the product of
/// P(z in A) over the distinct values z of x.
inline double exact_expected_reps(const random_model& model, int h, std::uint64_t n) {
  if (h < 2) throw domain_error("order h must be >= 2");
  if (partition_count(h, n) > expectation_cap) throw budget_error("exact_expected_reps: |R_h(n)| exceeds 10^7");
  const std::uint64_t hh = static_cast<std::uint64_t>(h);
  if (n < hh * model.m) return 0.0;

  detail::compensated_sum total;
  // Coordinates chosen in nondecreasing order; `weight` is the product over
  // the distinct values chosen so far, so a repeated value contributes once.
  std::vector<std::uint64_t> vals(h, 0);
  auto go = [&](auto&& self, std::size_t pos, std::uint64_t remaining, std::uint64_t least, double weight) -> void {
    const std::uint64_t parts_left = hh - pos;
    if (parts_left == 1) {
      if (remaining < least) return;
      const double w = (pos > 0 && vals[pos - 1] == remaining) ? weight : weight * inclusion_probability(model, remaining);
      total.add(w);
      return;
    }
    for (std::uint64_t v = least; v * parts_left <= remaining; ++v) {
      vals[pos] = v;
      const double w = (pos > 0 && vals[pos - 1] == v) ? weight : weight * inclusion_probability(model, v);
      if (w == 0.0) continue;
      self(self, pos + 1, remaining - v, v, w);
    }
  };
  go(go, 0, n, model.m, 1.0);
  return total.value();
}

/// (n/h)^{-alpha} * sum_{j=1}^{h} (n^{1-alpha} / (1-alpha))^{j-1}.
inline double erla_bound(int h, double alpha, std::uint64_t n) {
  if (h < 2) throw domain_error("order h must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
  if (n < static_cast<std::uint64_t>(h)) throw domain_error("erla_bound requires n >= h");
  const double nd = static_cast<double>(n);
  const double base = std::pow(nd, 1.0 - alpha) / (1.0 - alpha);
  detail::compensated_sum s;
  double term = 1.0;
  for (int j = 1; j <= h; ++j) {
    s.add(term);
    term *= base;
  }
  return std::pow(nd / h, -alpha) * s.value();
}

}  // namespace bhg
