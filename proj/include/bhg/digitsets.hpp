#pragma once

// B_h[1] digit sets: sets in which every integer has at most one
// representation as a nondecreasing sum of h elements.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhg/detail/primes.hpp"
#include "bhg/errors.hpp"
#include "bhg/natural.hpp"

namespace bhg {

enum class digit_set_source { greedy, bose_chowla, extended };

inline std::string to_string(digit_set_source s) {
  switch (s) {
    case digit_set_source::greedy: return "greedy";
    case digit_set_source::bose_chowla: return "bose_chowla";
    case digit_set_source::extended: return "extended";
  }
  return "unknown";
}

/// A B_h[1] set inside [0, bound), sorted, 0 included.
struct bh1_set {
  int h = 2;
  natural bound = 1;
  std::vector<std::uint64_t> elements{0};
  digit_set_source source = digit_set_source::greedy;

  std::size_t size() const { return elements.size(); }
  bool contains(std::uint64_t x) const { return std::binary_search(elements.begin(), elements.end(), x); }
};

/// Largest |s|^h accepted by the exhaustive checks.
inline constexpr std::uint64_t bh1_verify_cap = 100'000'000;
/// Largest field order p^h the Bose-Chowla generator will build.
inline constexpr std::uint64_t bose_chowla_cap = 10'000'000;

namespace detail {

inline void check_order(int h) {
  if (h < 2) throw domain_error("order h must be >= 2");
}

/// Calls visit(sum) for every h-multiset of `elements` (sorted ascending).
template <class Visit>
bool for_each_multiset_sum(std::span<const std::uint64_t> elements, int h, Visit&& visit) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(h), 0);
  const std::size_t n = elements.size();
  if (n == 0) return true;
  // Odometer over nondecreasing index tuples.
  while (true) {
    std::uint64_t sum = 0;
    for (std::size_t i : idx) sum += elements[i];
    if (!visit(sum)) return false;
    std::size_t pos = idx.size();
    while (pos > 0 && idx[pos - 1] == n - 1) --pos;
    if (pos == 0) return true;
    const std::size_t next = idx[pos - 1] + 1;
    for (std::size_t k = pos - 1; k < idx.size(); ++k) idx[k] = next;
  }
}

/// Incrementally grown B_h[1] set containing 0. Keeps the sums of all
/// k-multisets for k <= h, which are pairwise distinct for sets containing 0.
class bh1_builder {
 public:
  bh1_builder(int h, std::uint64_t max_element) : h_(h), sums_(static_cast<std::size_t>(h) + 1) {
    const std::uint64_t span = static_cast<std::uint64_t>(h) * max_element + 1;
    if (span > (std::uint64_t{1} << 34)) throw budget_error("B_h[1] builder range too large");
    marked_.assign(span, false);
    sums_[0].push_back(0);
  }

  const std::vector<std::uint64_t>& elements() const { return elements_; }

  /// Adds c when the result stays B_h[1]; returns whether it was added.
  bool try_add(std::uint64_t c) {
    fresh_.clear();
    const auto hh = static_cast<std::size_t>(h_);
    for (std::size_t t = 1; t <= hh; ++t) {
      for (std::uint64_t s : sums_[hh - t]) {
        const std::uint64_t v = t * c + s;
        if (v >= marked_.size() || marked_[v]) {
          rollback();
          return false;
        }
        marked_[v] = true;
        fresh_.push_back(v);
      }
    }
    // Accepted: refresh lower-order sums from the old lists, top-down. The
    // order-h sums live only in marked_.
    for (std::size_t k = hh - 1; k >= 1; --k) {
      std::vector<std::uint64_t> added;
      for (std::size_t t = 1; t <= k; ++t) {
        for (std::uint64_t s : sums_[k - t]) added.push_back(t * c + s);
      }
      sums_[k].insert(sums_[k].end(), added.begin(), added.end());
    }
    elements_.insert(std::upper_bound(elements_.begin(), elements_.end(), c), c);
    return true;
  }

 private:
  void rollback() {
    for (std::uint64_t v : fresh_) marked_[v] = false;
    fresh_.clear();
  }

  int h_;
  std::vector<std::vector<std::uint64_t>> sums_;
  std::vector<bool> marked_;
  std::vector<std::uint64_t> fresh_;
  std::vector<std::uint64_t> elements_;
};

/// GF(p^h) as F_p[x]/(f) with f monic of degree h; elements are coefficient
/// vectors of length h, low degree first.
class prime_power_field {
 public:
  using element = std::vector<std::uint64_t>;

  prime_power_field(std::uint64_t p, unsigned h, element low_coefficients)
      : p_(p), h_(h), f_(std::move(low_coefficients)) {}

  std::uint64_t order() const { return saturating_pow(p_, h_); }

  element one() const {
    element e(h_, 0);
    e[0] = 1;
    return e;
  }
  element x() const {
    element e(h_, 0);
    e[1 % h_] = 1;
    return e;
  }

  element mul(const element& a, const element& b) const {
    std::vector<std::uint64_t> t(2 * h_ - 1, 0);
    for (unsigned i = 0; i < h_; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < h_; ++j) t[i + j] = (t[i + j] + a[i] * b[j]) % p_;
    }
    for (unsigned d = 2 * h_ - 2; d >= h_; --d) {
      const std::uint64_t top = t[d];
      if (top != 0) {
        for (unsigned i = 0; i < h_; ++i) t[d - h_ + i] = (t[d - h_ + i] + (p_ - top) * f_[i]) % p_;
      }
      t[d] = 0;
    }
    t.resize(h_);
    return t;
  }

  /// a * x, O(h).
  void mul_x_inplace(element& a) const {
    const std::uint64_t top = a[h_ - 1];
    for (unsigned i = h_ - 1; i > 0; --i) a[i] = (a[i - 1] + (p_ - top) * f_[i]) % p_;
    a[0] = ((p_ - top) * f_[0]) % p_;
  }

  element pow(element base, std::uint64_t e) const {
    element r = one();
    while (e != 0) {
      if (e & 1U) r = mul(r, base);
      base = mul(base, base);
      e >>= 1U;
    }
    return r;
  }

 private:
  std::uint64_t p_;
  unsigned h_;
  element f_;
};

/// Remainder of the monic polynomial x^h + sum f_i x^i modulo the monic g
/// (high coefficient implicit); true when it vanishes.
inline bool divides(const std::vector<std::uint64_t>& f_low, const std::vector<std::uint64_t>& g_low,
                    std::uint64_t p) {
  const std::size_t h = f_low.size();
  const std::size_t d = g_low.size();
  std::vector<std::uint64_t> r(f_low);
  r.push_back(1);
  for (std::size_t deg = h; deg >= d; --deg) {
    const std::uint64_t top = r[deg];
    if (top != 0) {
      for (std::size_t i = 0; i < d; ++i) r[deg - d + i] = (r[deg - d + i] + (p - top) * g_low[i]) % p;
      r[deg] = 0;
    }
  }
  return std::all_of(r.begin(), r.end(), [](std::uint64_t c) { return c == 0; });
}

inline std::vector<std::uint64_t> digits_base(std::uint64_t code, std::uint64_t p, std::size_t len) {
  std::vector<std::uint64_t> out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = code % p;
    code /= p;
  }
  return out;
}

inline bool irreducible(const std::vector<std::uint64_t>& f_low, std::uint64_t p) {
  const std::size_t h = f_low.size();
  for (std::size_t d = 1; d <= h / 2; ++d) {
    const std::uint64_t count = saturating_pow(p, static_cast<unsigned>(d));
    for (std::uint64_t code = 0; code < count; ++code) {
      if (divides(f_low, digits_base(code, p, d), p)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exhaustive check that all h-multiset sums of the elements are distinct.
/// Throws budget_error when |s|^h exceeds bh1_verify_cap.
inline bool verify_bh1(std::span<const std::uint64_t> elements, int h) {
  detail::check_order(h);
  if (!std::is_sorted(elements.begin(), elements.end()) ||
      std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
    std::vector<std::uint64_t> sorted(elements.begin(), elements.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    return verify_bh1(sorted, h);
  }
  if (elements.size() <= 1) return true;
  if (detail::saturating_pow(elements.size(), static_cast<unsigned>(h)) > bh1_verify_cap) {
    throw budget_error("verify_bh1: |s|^h exceeds 10^8");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(h) * elements.back() + 1;
  if (span <= (std::uint64_t{1} << 31)) {
    std::vector<bool> seen(span, false);
    return detail::for_each_multiset_sum(elements, h, [&](std::uint64_t s) {
      if (seen[s]) return false;
      seen[s] = true;
      return true;
    });
  }
  std::vector<std::uint64_t> sums;
  detail::for_each_multiset_sum(elements, h, [&](std::uint64_t s) {
    sums.push_back(s);
    return true;
  });
  std::sort(sums.begin(), sums.end());
  return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

inline bool verify_bh1(const bh1_set& s) { return verify_bh1(s.elements, s.h); }

/// Lexicographically greedy maximal B_h[1] subset of [0, limit).
inline bh1_set greedy_bh1(int h, std::uint64_t limit) {
  detail::check_order(h);
  if (limit < 1) throw domain_error("greedy_bh1: limit must be >= 1");
  detail::bh1_builder builder(h, limit - 1);
  for (std::uint64_t c = 0; c < limit; ++c) builder.try_add(c);
  return {h, natural(limit), builder.elements(), digit_set_source::greedy};
}

/// Adds, in increasing order, every z in [0, limit) that keeps the set B_h[1].
inline bh1_set extend_greedy(const bh1_set& base, std::uint64_t limit) {
  detail::check_order(base.h);
  const std::uint64_t top = std::max(limit == 0 ? 0 : limit - 1, base.elements.empty() ? 0 : base.elements.back());
  detail::bh1_builder builder(base.h, top);
  for (std::uint64_t e : base.elements) {
    if (!builder.try_add(e)) throw domain_error("extend_greedy: base set is not B_h[1]");
  }
  for (std::uint64_t c = 0; c < limit; ++c) {
    if (!base.contains(c)) builder.try_add(c);
  }
  return {base.h, natural(limit), builder.elements(), digit_set_source::extended};
}

/// Bose-Chowla set: with theta a generator of GF(p^h)^*, the exponents
/// a in [1, p^h - 1] with theta^a - theta in F_p, shifted so the minimum is 0.
/// The result has p elements inside [0, p^h - 2].
inline bh1_set bose_chowla(int h, std::uint64_t p) {
  detail::check_order(h);
  if (!detail::is_prime(p)) throw domain_error("bose_chowla: p = " + std::to_string(p) + " is not prime");
  const auto hu = static_cast<unsigned>(h);
  const std::uint64_t q = detail::saturating_pow(p, hu);
  if (q > bose_chowla_cap) throw budget_error("bose_chowla: p^h exceeds 10^7");
  const std::uint64_t group_order = q - 1;
  const auto factors = detail::prime_factors(group_order);

  // First monic f (in code order) for which x generates the multiplicative group.
  std::optional<detail::prime_power_field> field;
  for (std::uint64_t code = 1; code < q && !field; ++code) {
    auto low = detail::digits_base(code, p, hu);
    if (low[0] == 0 || !detail::irreducible(low, p)) continue;
    detail::prime_power_field candidate(p, hu, low);
    const auto one = candidate.one();
    bool primitive = true;
    for (std::uint64_t f : factors) {
      if (candidate.pow(candidate.x(), group_order / f) == one) {
        primitive = false;
        break;
      }
    }
    if (primitive) field.emplace(std::move(candidate));
  }
  if (!field) throw internal_error("bose_chowla: no primitive polynomial found");

  std::vector<std::uint64_t> exponents;
  auto power = field->x();
  for (std::uint64_t a = 1; a <= group_order; ++a) {
    // power = x^a; x^a - x is in F_p iff coefficient 1 is 1 and degrees >= 2 vanish.
    bool in_subfield = power[1] == 1;
    for (unsigned i = 2; in_subfield && i < hu; ++i) in_subfield = power[i] == 0;
    if (in_subfield) exponents.push_back(a);
    field->mul_x_inplace(power);
  }
  const std::uint64_t shift = exponents.front();
  for (auto& e : exponents) e -= shift;

  bh1_set out{h, natural(q - 1), std::move(exponents), digit_set_source::bose_chowla};
  if (out.size() != p || out.elements.back() > q - 2 || !verify_bh1(out)) {
    throw internal_error("bose_chowla: produced set fails verification (field arithmetic bug)");
  }
  return out;
}

/// Digit set A for base q: a B_h[1] subset of [0, ceil(q/h) - 1] containing 0.
/// Uses the largest prime p with p^h - 2 < q/h (and p^h within the Bose-Chowla
/// cap), falling back to the greedy set when no prime qualifies.
inline bh1_set digit_set_for_base(int h, const natural& q, bool extend = false,
                                  std::uint64_t cap = bose_chowla_cap) {
  detail::check_order(h);
  if (q < 2) throw domain_error("digit_set_for_base: q must be >= 2");
  const natural limit = (q + h - 1) / h;
  const auto hu = static_cast<unsigned>(h);

  // Largest p with p^h <= cap, then lower it until h (p^h - 2) < q.
  std::uint64_t p = 1;
  while (detail::saturating_pow(p + 1, hu) <= cap) ++p;
  auto fits = [&](std::uint64_t c) { return natural(h) * (natural(detail::saturating_pow(c, hu)) - 2) < q; };
  while (p >= 2 && !(fits(p) && detail::is_prime(p))) --p;

  bh1_set out;
  if (p >= 2) {
    out = bose_chowla(h, p);
    if (extend) {
      auto lim = to_u64(limit);
      if (!lim || *lim > bh1_verify_cap) throw budget_error("digit_set_for_base: extension range too large");
      out = extend_greedy(out, *lim);
    }
  } else {
    out = greedy_bh1(h, limit.convert_to<std::uint64_t>());
  }
  out.bound = limit;
  return out;
}

}  // namespace bhg
