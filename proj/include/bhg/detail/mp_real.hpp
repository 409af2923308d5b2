#pragma once

// Thin RAII owner of an mpfr_t. Every value carries its own precision; no
// global default precision is touched.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <mpfr.h>

#include "bhg/natural.hpp"

namespace bhg::detail {

/// Bits needed to carry `digits` significant decimal digits, plus slack.
inline mpfr_prec_t bits_for_digits(double digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 16;
}

class mp_real {
 public:
  explicit mp_real(mpfr_prec_t bits) { mpfr_init2(value_, bits); mpfr_set_zero(value_, 1); }
  mp_real(mpfr_prec_t bits, long v) : mp_real(bits) { mpfr_set_si(value_, v, MPFR_RNDN); }
  mp_real(const mp_real& other) : mp_real(mpfr_get_prec(other.value_)) {
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  mp_real(mp_real&& other) noexcept : mp_real(mpfr_get_prec(other.value_)) {
    mpfr_swap(value_, other.value_);
  }
  mp_real& operator=(mp_real other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }
  ~mp_real() { mpfr_clear(value_); }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Decimal rendering with `digits` significant digits.
  std::string str(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, value_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

 private:
  mpfr_t value_;
};

/// floor(x) as a natural; x must be non-negative.
inline natural floor_natural(const mp_real& x) {
  natural out;
  mpfr_get_z(out.backend().data(), x.get(), MPFR_RNDD);
  return out;
}

}  // namespace bhg::detail
