#pragma once

// Explicit B_h[g] construction over the variable-base system: x belongs to A
// when every digit b_i lies in the B_h[1] digit set A_{i+1} and all nonzero
// digits fit in a window of l consecutive digit positions. Because
// A_{i+1} is contained in [0, q_{i+1}/h), adding h members never carries, and
// r_{h,A}(n) <= (h!)^{lh}.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "bhg/detail/mp_real.hpp"
#include "bhg/digitsets.hpp"
#include "bhg/errors.hpp"
#include "bhg/natural.hpp"
#include "bhg/sequence.hpp"
#include "bhg/varbase.hpp"

namespace bhg {

/// Output-size cap for enumerate_upto.
inline constexpr std::uint64_t explicit_enumeration_budget = 10'000'000;

class explicit_params {
 public:
  explicit_params(int h, std::uint64_t l, unsigned precision = base_schedule::default_precision,
                  bool extend_digit_sets = false)
      : h_(h), schedule_(l, precision), cache_(std::make_shared<cache>()) {
    detail::check_order(h);
    cache_->extend = extend_digit_sets;
  }

  int h() const { return h_; }
  std::uint64_t l() const { return schedule_.window(); }
  const base_schedule& schedule() const { return schedule_; }

  /// A_i, the digit set for base q_i (1-indexed); filled lazily, once.
  const bh1_set& digit_set(std::size_t i) const {
    if (i == 0) throw domain_error("digit sets are 1-indexed");
    {
      std::shared_lock lock(cache_->mutex);
      if (cache_->sets.size() >= i) return cache_->sets[i - 1];
    }
    std::unique_lock lock(cache_->mutex);
    while (cache_->sets.size() < i) {
      const std::size_t next = cache_->sets.size() + 1;
      cache_->sets.push_back(digit_set_for_base(h_, schedule_.base(next), cache_->extend));
    }
    return cache_->sets[i - 1];
  }

 private:
  struct cache {
    std::shared_mutex mutex;
    std::deque<bh1_set> sets;
    bool extend = false;
  };

  int h_;
  base_schedule schedule_;
  std::shared_ptr<cache> cache_;
};

namespace detail {

/// Digits (low first) admissible for the construction?
template <class Digit>
bool admissible_digits(const explicit_params& params, const std::vector<Digit>& digits) {
  std::size_t lowest = digits.size();
  std::size_t highest = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] == 0) continue;
    auto d = to_u64(natural(digits[i]));
    if (!d || !params.digit_set(i + 1).contains(*d)) return false;
    lowest = std::min(lowest, i);
    highest = i;
  }
  if (lowest == digits.size()) return true;
  return highest - lowest < params.l();
}

template <>
inline bool admissible_digits<std::uint64_t>(const explicit_params& params, const std::vector<std::uint64_t>& digits) {
  std::size_t lowest = digits.size();
  std::size_t highest = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] == 0) continue;
    if (!params.digit_set(i + 1).contains(digits[i])) return false;
    lowest = std::min(lowest, i);
    highest = i;
  }
  if (lowest == digits.size()) return true;
  return highest - lowest < params.l();
}

}  // namespace detail

/// Membership of x >= 1 in the explicit sequence.
inline bool contains(const explicit_params& params, std::uint64_t x) {
  if (x == 0) return false;
  return detail::admissible_digits(params, decode_digits(params.schedule(), x));
}

inline bool contains(const explicit_params& params, const natural& x) {
  if (x <= 0) return false;
  if (auto small = to_u64(x)) return contains(params, *small);
  return detail::admissible_digits(params, decode(params.schedule(), x).digits());
}

/// Upper bound on |A ∩ [1, x]| from the window structure: digits at positions
/// i with q_1...q_i > x must vanish.
inline natural predicted_count(const explicit_params& params, const natural& x) {
  const auto& sched = params.schedule();
  natural total = 0;
  for (std::size_t start = 0; sched.prefix_product(start) <= x; ++start) {
    natural window = params.digit_set(start + 1).size() - 1;
    for (std::size_t i = start + 1; i < start + params.l() && sched.prefix_product(i) <= x; ++i) {
      window *= params.digit_set(i + 1).size();
    }
    total += window;
  }
  return total;
}

/// Every explicit element in [1, x], ascending. Windows are keyed by their
/// lowest nonzero digit, so every element is produced exactly once.
inline big_sequence enumerate_upto(const explicit_params& params, const natural& x,
                                   std::uint64_t budget = explicit_enumeration_budget) {
  if (x < 1) throw domain_error("enumerate_upto: x must be >= 1");
  if (predicted_count(params, x) > budget) {
    throw budget_error("enumerate_upto: predicted output exceeds " + std::to_string(budget) + " elements");
  }
  const auto& sched = params.schedule();
  std::vector<natural> out;

  for (std::size_t start = 0; sched.prefix_product(start) <= x; ++start) {
    // Positions start .. top hold the window digits; b_start != 0.
    std::size_t top = start;
    while (top + 1 < start + params.l() && sched.prefix_product(top + 1) <= x) ++top;

    // Depth-first from the highest position so partial values only grow.
    auto recurse = [&](auto&& self, std::size_t pos, const natural& value) -> void {
      const bh1_set& digits = params.digit_set(pos + 1);
      const natural& weight = sched.prefix_product(pos);
      for (std::uint64_t d : digits.elements) {
        if (pos == start && d == 0) continue;
        natural v = value + weight * d;
        if (v > x) break;
        if (pos == start) {
          out.push_back(std::move(v));
        } else {
          self(self, pos - 1, v);
        }
      }
    };
    recurse(recurse, top, natural(0));
  }
  std::sort(out.begin(), out.end());

  sequence_meta meta;
  meta.source = "explicit";
  meta.h = params.h();
  meta.l = params.l();
  meta.N = x;
  return big_sequence(std::move(out), std::move(meta));
}

/// (h!)^{lh}: the representation bound of the explicit sequence.
inline natural rep_bound(int h, std::uint64_t l) {
  if (h < 2 || l < 2) throw domain_error("rep_bound requires h >= 2 and l >= 2");
  natural fact = 1;
  for (int k = 2; k <= h; ++k) fact *= k;
  natural out = 1;
  for (std::uint64_t k = 0; k < l * static_cast<std::uint64_t>(h); ++k) out *= fact;
  return out;
}

/// N = |A_{j-l+1}| ... |A_j|: integers whose digits b_{j-l}, ..., b_{j-1} lie in
/// the digit sets and whose other digits vanish (0 included).
inline natural window_count(const explicit_params& params, std::size_t j) {
  if (j < params.l()) throw domain_error("window_count requires j >= l");
  natural out = 1;
  for (std::size_t i = j - params.l() + 1; i <= j; ++i) out *= params.digit_set(i).size();
  return out;
}

/// Density bounds for the explicit construction at scale j, all evaluated at
/// working precision and rounded to double for reporting.
struct explicit_diagnostics {
  int h = 2;
  std::uint64_t l = 2;
  std::size_t j = 2;
  double r = 0;
  double log_n_upper = 0;     // (1+r)^{j+1} / r
  double log_N_lower = 0;     // (1+r)^j (1 - (1+r)^{-l}) / (h r) - 2l
  double ratio = 0;           // (1 - (1+r)^{-l})/(1+r) - 2lrh/(1+r)^{j+1}
  double window_term = 0;     // (1 - (1+r)^{-l}) / (1+r)
  double window_floor = 0;    // 1 - 2 log2(l)/l
  bool window_term_ok = false;
  double tail_term = 0;       // 2lrh / (1+r)^{j+1}
  double tail_limit = 0;      // log2(l)/l
  bool tail_term_ok = false;
  double threshold = 0;       // 1 - 3 log2(l)/l
  bool flag = false;          // ratio > threshold
};

inline explicit_diagnostics diagnostics(int h, std::uint64_t l, std::size_t j,
                                        unsigned precision = base_schedule::default_precision) {
  detail::check_order(h);
  if (l < 2 || j < l) throw domain_error("diagnostics requires j >= l >= 2");
  using detail::mp_real;
  const mpfr_prec_t bits = detail::bits_for_digits(precision);
  const auto rnd = MPFR_RNDN;
  const auto lu = static_cast<unsigned long>(l);
  const auto hu = static_cast<unsigned long>(h);

  mp_real r = base_schedule::r_value(l, bits);
  mp_real one_r(bits);
  mpfr_add_ui(one_r.get(), r.get(), 1, rnd);

  mp_real pow_j(bits), pow_j1(bits), pow_neg_l(bits);
  mpfr_pow_ui(pow_j.get(), one_r.get(), static_cast<unsigned long>(j), rnd);
  mpfr_pow_ui(pow_j1.get(), one_r.get(), static_cast<unsigned long>(j + 1), rnd);
  mpfr_pow_si(pow_neg_l.get(), one_r.get(), -static_cast<long>(l), rnd);

  mp_real one_minus(bits);  // 1 - (1+r)^{-l}
  mpfr_ui_sub(one_minus.get(), 1, pow_neg_l.get(), rnd);

  mp_real log_n(bits);
  mpfr_div(log_n.get(), pow_j1.get(), r.get(), rnd);

  mp_real log_N(bits);
  mpfr_mul(log_N.get(), pow_j.get(), one_minus.get(), rnd);
  mpfr_div(log_N.get(), log_N.get(), r.get(), rnd);
  mpfr_div_ui(log_N.get(), log_N.get(), hu, rnd);
  mpfr_sub_ui(log_N.get(), log_N.get(), 2 * lu, rnd);

  mp_real window_term(bits);
  mpfr_div(window_term.get(), one_minus.get(), one_r.get(), rnd);

  mp_real tail(bits);
  mpfr_mul_ui(tail.get(), r.get(), 2 * lu * hu, rnd);
  mpfr_div(tail.get(), tail.get(), pow_j1.get(), rnd);

  mp_real ratio(bits);
  mpfr_sub(ratio.get(), window_term.get(), tail.get(), rnd);

  mp_real log2l(bits);  // log2(l)/l = r
  mpfr_set(log2l.get(), r.get(), rnd);

  mp_real window_floor(bits);
  mpfr_mul_ui(window_floor.get(), log2l.get(), 2, rnd);
  mpfr_ui_sub(window_floor.get(), 1, window_floor.get(), rnd);

  mp_real threshold(bits);
  mpfr_mul_ui(threshold.get(), log2l.get(), 3, rnd);
  mpfr_ui_sub(threshold.get(), 1, threshold.get(), rnd);

  explicit_diagnostics d;
  d.h = h;
  d.l = l;
  d.j = j;
  d.r = r.to_double();
  d.log_n_upper = log_n.to_double();
  d.log_N_lower = log_N.to_double();
  d.ratio = ratio.to_double();
  d.window_term = window_term.to_double();
  d.window_floor = window_floor.to_double();
  d.window_term_ok = mpfr_greater_p(window_term.get(), window_floor.get()) != 0;
  d.tail_term = tail.to_double();
  d.tail_limit = log2l.to_double();
  d.tail_term_ok = mpfr_less_p(tail.get(), log2l.get()) != 0;
  d.threshold = threshold.to_double();
  d.flag = mpfr_greater_p(ratio.get(), threshold.get()) != 0;
  return d;
}

}  // namespace bhg
