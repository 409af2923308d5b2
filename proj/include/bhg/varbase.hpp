#pragma once

// Variable-base numeral system.
//
// Every natural x has a unique expansion
//
//     x = b_0 + b_1 q_1 + b_2 q_1 q_2 + ...,   0 <= b_i < q_{i+1},
//
// with bases q_i = floor(exp((1 + r)^(i-1))) and r = log2(l) / l. Bases are
// 1-indexed; digit b_i pairs with base q_{i+1}.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "bhg/detail/mp_real.hpp"
#include "bhg/errors.hpp"
#include "bhg/natural.hpp"

namespace bhg {

/// Cached bases of the variable-base system for a window length l.
///
/// Copies are cheap handles sharing one cache. The cache is filled at most
/// once per index and is safe under concurrent readers.
class base_schedule {
 public:
  static constexpr unsigned default_precision = 64;

  explicit base_schedule(std::uint64_t l, unsigned precision = default_precision)
      : state_(std::make_shared<state>()) {
    if (l < 2) throw domain_error("window length l must be >= 2");
    if (precision < 50) throw domain_error("precision must be >= 50 decimal digits");
    state_->l = l;
    state_->precision = precision;
    state_->prefix.emplace_back(1);
  }

  std::uint64_t window() const { return state_->l; }
  unsigned precision() const { return state_->precision; }

  /// r = log2(l)/l, rounded to double. The exact evaluation lives in r_value().
  double r() const { return r_value(state_->l, 64).to_double(); }

  /// q_i for i >= 1.
  const natural& base(std::size_t i) const {
    if (i == 0) throw domain_error("bases are 1-indexed");
    ensure(i);
    std::shared_lock lock(state_->mutex);
    return state_->bases[i - 1];
  }

  /// q_i saturated to 64 bits (UINT64_MAX when q_i does not fit).
  std::uint64_t small_base(std::size_t i) const {
    if (i == 0) throw domain_error("bases are 1-indexed");
    ensure(i);
    std::shared_lock lock(state_->mutex);
    return state_->small[i - 1];
  }

  /// q_1 * ... * q_i; prefix_product(0) = 1.
  const natural& prefix_product(std::size_t i) const {
    if (i > 0) ensure(i);
    std::shared_lock lock(state_->mutex);
    return state_->prefix[i];
  }

  /// Indices i >= 2 (up to `upto`) with q_{i+1} <= q_i. Consecutive floors can
  /// coincide for large l and small i; this reports rather than repairs them.
  std::vector<std::size_t> monotonicity_violations(std::size_t upto) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 2; i < upto; ++i) {
      if (base(i + 1) <= base(i)) out.push_back(i);
    }
    return out;
  }

  /// r = log2(l)/l evaluated with `bits` bits of precision.
  static detail::mp_real r_value(std::uint64_t l, mpfr_prec_t bits) {
    detail::mp_real r(bits);
    mpfr_set_ui(r.get(), static_cast<unsigned long>(l), MPFR_RNDN);
    mpfr_log2(r.get(), r.get(), MPFR_RNDN);
    mpfr_div_ui(r.get(), r.get(), static_cast<unsigned long>(l), MPFR_RNDN);
    return r;
  }

  /// exp((1+r)^(i-1)) at a precision that leaves `precision` correct decimal
  /// digits after the point. Also reports the distance to the nearest integer.
  static detail::mp_real exponential_at(std::uint64_t l, std::size_t i, unsigned precision) {
    const double r_approx = std::log2(static_cast<double>(l)) / static_cast<double>(l);
    const double t_approx = std::pow(1.0 + r_approx, static_cast<double>(i - 1));
    if (t_approx > 1e7) throw budget_error("base q_" + std::to_string(i) + " has more than 10^6 digits");
    const double integer_digits = t_approx / std::log(10.0) + 1.0;
    const double exponent_digits = std::log10(t_approx + 1.0) + 1.0;
    const mpfr_prec_t bits = detail::bits_for_digits(precision + integer_digits + exponent_digits + 8.0);

    detail::mp_real t = r_value(l, bits);
    mpfr_add_ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_pow_ui(t.get(), t.get(), static_cast<unsigned long>(i - 1), MPFR_RNDN);
    detail::mp_real v(bits);
    mpfr_exp(v.get(), t.get(), MPFR_RNDN);
    return v;
  }

 private:
  struct state {
    std::uint64_t l = 2;
    unsigned precision = default_precision;
    std::shared_mutex mutex;
    std::deque<natural> bases;
    std::deque<std::uint64_t> small;
    std::deque<natural> prefix;
  };

  void ensure(std::size_t i) const {
    {
      std::shared_lock lock(state_->mutex);
      if (state_->bases.size() >= i) return;
    }
    std::unique_lock lock(state_->mutex);
    while (state_->bases.size() < i) {
      const std::size_t next = state_->bases.size() + 1;
      natural q = compute_base(next);
      state_->small.push_back(to_u64(q).value_or(std::numeric_limits<std::uint64_t>::max()));
      state_->prefix.push_back(state_->prefix.back() * q);
      state_->bases.push_back(std::move(q));
    }
  }

  natural compute_base(std::size_t i) const {
    const unsigned precision = state_->precision;
    detail::mp_real v = exponential_at(state_->l, i, precision);
    natural q = detail::floor_natural(v);

    // Guard band 10^(-precision/2) around integers.
    detail::mp_real frac(v.bits());
    mpfr_frac(frac.get(), v.get(), MPFR_RNDN);
    detail::mp_real guard(v.bits());
    mpfr_set_ui(guard.get(), 10, MPFR_RNDN);
    mpfr_pow_si(guard.get(), guard.get(), -static_cast<long>(precision / 2), MPFR_RNDN);
    detail::mp_real upper(v.bits(), 1);
    mpfr_sub(upper.get(), upper.get(), guard.get(), MPFR_RNDN);
    if (mpfr_less_p(frac.get(), guard.get()) || mpfr_greater_p(frac.get(), upper.get())) {
      throw precision_error("floor of exp((1+r)^" + std::to_string(i - 1) + ") is ambiguous at " +
                            std::to_string(precision) + " digits; retry with a larger precision");
    }
    return q;
  }

  std::shared_ptr<state> state_;
};

/// q_i of the schedule (1-indexed).
inline const natural& base_at(const base_schedule& schedule, std::size_t i) { return schedule.base(i); }

/// Digits b_0, b_1, ... of a number in the variable-base system. Digits beyond
/// the stored ones are zero; decode() never stores trailing zeros.
class digit_vector {
 public:
  digit_vector(base_schedule schedule, std::vector<natural> digits)
      : schedule_(std::move(schedule)), digits_(std::move(digits)) {
    while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
  }

  const base_schedule& schedule() const { return schedule_; }
  const std::vector<natural>& digits() const { return digits_; }
  std::size_t size() const { return digits_.size(); }

  /// b_i, zero beyond the stored digits.
  natural digit(std::size_t i) const { return i < digits_.size() ? digits_[i] : natural(0); }

  friend bool operator==(const digit_vector& a, const digit_vector& b) { return a.digits_ == b.digits_; }

 private:
  base_schedule schedule_;
  std::vector<natural> digits_;
};

/// Digits of x as machine words (b_i fits because b_i <= x).
inline std::vector<std::uint64_t> decode_digits(const base_schedule& schedule, std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 1; x != 0; ++i) {
    const std::uint64_t q = schedule.small_base(i);
    out.push_back(x % q);
    x /= q;
  }
  return out;
}

inline digit_vector decode(const base_schedule& schedule, std::uint64_t x) {
  std::vector<natural> digits;
  for (std::uint64_t d : decode_digits(schedule, x)) digits.emplace_back(d);
  return {schedule, std::move(digits)};
}

inline digit_vector decode(const base_schedule& schedule, const natural& x) {
  if (x < 0) throw domain_error("decode: negative input");
  if (auto small = to_u64(x)) return decode(schedule, *small);
  std::vector<natural> digits;
  natural rest = x;
  for (std::size_t i = 1; rest != 0; ++i) {
    const natural& q = schedule.base(i);
    natural digit;
    boost::multiprecision::divide_qr(rest, q, rest, digit);
    digits.push_back(std::move(digit));
  }
  return {schedule, std::move(digits)};
}

/// Sum of b_i * q_1 ... q_i. Throws range_error when some b_i >= q_{i+1}.
inline natural encode(const digit_vector& v) {
  const auto& digits = v.digits();
  natural x = 0;
  for (std::size_t k = digits.size(); k-- > 0;) {
    const natural& q = v.schedule().base(k + 1);
    if (digits[k] < 0 || digits[k] >= q) {
      throw range_error("digit b_" + std::to_string(k) + " = " + digits[k].str() + " is not below q_" +
                        std::to_string(k + 1) + " = " + q.str());
    }
    x = x * q + digits[k];
  }
  return x;
}

}  // namespace bhg
