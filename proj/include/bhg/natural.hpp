#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

#include "bhg/errors.hpp"

namespace bhg {

/// Arbitrary-precision natural number (GMP backed).
using natural = boost::multiprecision::mpz_int;

inline std::string to_string(const natural& x) { return x.str(); }

/// Parses a non-negative decimal integer. Underscores between digits are
/// accepted as separators ("500_000").
inline natural parse_natural(std::string_view text) {
  std::string digits;
  digits.reserve(text.size());
  for (char c : text) {
    if (c == '_') continue;
    if (c < '0' || c > '9') {
      throw domain_error("not a natural number: '" + std::string(text) + "'");
    }
    digits.push_back(c);
  }
  if (digits.empty()) throw domain_error("empty natural number");
  return natural(digits);
}

/// Narrowing conversion; std::nullopt when x does not fit.
inline std::optional<std::uint64_t> to_u64(const natural& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return x.convert_to<std::uint64_t>();
}

inline std::uint64_t parse_u64(std::string_view text) {
  auto v = to_u64(parse_natural(text));
  if (!v) throw range_error("value does not fit in 64 bits: " + std::string(text));
  return *v;
}

}  // namespace bhg
