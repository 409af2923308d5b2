#pragma once

// Finite (truncated) integer sequences and the shared sequence file format:
//
//   # bhgseq v1 source=<tag> h=<h> [l=<l>|alpha=<a> m=<m> seed=<s>] N=<N>
//   <element>
//   ...
//
// one decimal element per line, strictly increasing.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bhg/errors.hpp"
#include "bhg/natural.hpp"

namespace bhg {

/// Where a sequence came from plus the parameters needed to regenerate it.
struct sequence_meta {
  std::string source = "literal";  // explicit | random | greedy | bose_chowla | extended | pruned | literal
  std::optional<int> h;
  std::optional<std::uint64_t> l;
  std::optional<double> alpha;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> seed;
  std::optional<natural> N;  // truncation bound: every element <= N

  friend bool operator==(const sequence_meta&, const sequence_meta&) = default;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace detail {
inline natural as_natural(std::uint64_t v) { return natural(v); }
inline const natural& as_natural(const natural& v) { return v; }
inline std::string element_text(std::uint64_t v) { return std::to_string(v); }
inline std::string element_text(const natural& v) { return v.str(); }
template <class T> T parse_element(std::string_view s);
template <> inline std::uint64_t parse_element<std::uint64_t>(std::string_view s) { return parse_u64(s); }
template <> inline natural parse_element<natural>(std::string_view s) { return parse_natural(s); }
}  // namespace detail

/// Strictly increasing naturals with provenance. Digit sets are 0-based, so 0
/// is admitted; counting functions only look at positive elements.
template <class T>
class basic_sequence {
 public:
  using value_type = T;

  basic_sequence() = default;

  /// Throws domain_error unless `elements` is strictly increasing and bounded by meta.N.
  explicit basic_sequence(std::vector<T> elements, sequence_meta meta = {})
      : elements_(std::move(elements)), meta_(std::move(meta)) {
    for (std::size_t i = 1; i < elements_.size(); ++i) {
      if (!(elements_[i - 1] < elements_[i])) throw domain_error("sequence elements must be strictly increasing");
    }
    if (!elements_.empty() && meta_.N && detail::as_natural(elements_.back()) > *meta_.N) {
      throw domain_error("sequence element exceeds truncation bound N");
    }
  }

  /// Sorts and removes duplicates first.
  static basic_sequence from_unsorted(std::vector<T> elements, sequence_meta meta = {}) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return basic_sequence(std::move(elements), std::move(meta));
  }

  const std::vector<T>& elements() const { return elements_; }
  const sequence_meta& meta() const { return meta_; }
  sequence_meta& meta() { return meta_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }
  const T& operator[](std::size_t i) const { return elements_[i]; }

  bool contains(const T& x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

  /// Elements <= bound, same metadata with N = bound.
  basic_sequence truncated(const T& bound) const {
    auto last = std::upper_bound(elements_.begin(), elements_.end(), bound);
    sequence_meta meta = meta_;
    meta.N = detail::as_natural(bound);
    return basic_sequence(std::vector<T>(elements_.begin(), last), std::move(meta));
  }

  friend bool operator==(const basic_sequence&, const basic_sequence&) = default;

 private:
  std::vector<T> elements_;
  sequence_meta meta_;
};

using sequence = basic_sequence<std::uint64_t>;
using big_sequence = basic_sequence<natural>;

/// Machine-width copy; range_error if an element does not fit in 64 bits.
inline sequence narrow(const big_sequence& s) {
  std::vector<std::uint64_t> out;
  out.reserve(s.size());
  for (const auto& x : s) {
    auto v = to_u64(x);
    if (!v) throw range_error("sequence element " + x.str() + " exceeds 64 bits");
    out.push_back(*v);
  }
  return sequence(std::move(out), s.meta());
}

inline std::string header_line(const sequence_meta& meta) {
  std::ostringstream os;
  os << "# bhgseq v1 source=" << meta.source << " h=" << meta.h.value_or(0);
  if (meta.l) {
    os << " l=" << *meta.l;
  } else if (meta.alpha) {
    os << " alpha=" << format_real(*meta.alpha) << " m=" << meta.m.value_or(1);
    if (meta.seed) os << " seed=" << *meta.seed;
  }
  if (meta.N) os << " N=" << meta.N->str();
  return os.str();
}

template <class T>
void write_sequence(std::ostream& os, const basic_sequence<T>& s) {
  os << header_line(s.meta()) << '\n';
  for (const auto& x : s) os << detail::element_text(x) << '\n';
}

inline sequence_meta parse_header(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::string hash, magic, version;
  is >> hash >> magic >> version;
  if (hash != "#" || magic != "bhgseq" || version != "v1") throw domain_error("not a bhgseq v1 header");
  sequence_meta meta;
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw domain_error("malformed header token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "source") {
      meta.source = value;
    } else if (key == "h") {
      meta.h = static_cast<int>(parse_u64(value));
      if (*meta.h == 0) meta.h.reset();
    } else if (key == "l") {
      meta.l = parse_u64(value);
    } else if (key == "alpha") {
      double a = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), a);
      if (ec != std::errc{} || p != value.data() + value.size()) throw domain_error("bad alpha '" + value + "'");
      meta.alpha = a;
    } else if (key == "m") {
      meta.m = parse_u64(value);
    } else if (key == "seed") {
      meta.seed = parse_u64(value);
    } else if (key == "N") {
      meta.N = parse_natural(value);
    } else {
      throw domain_error("unknown header key '" + key + "'");
    }
  }
  return meta;
}

/// Reads a sequence file. A file without a bhgseq header is read leniently as
/// a literal list (whitespace or comma separated, any order).
template <class T = std::uint64_t>
basic_sequence<T> read_sequence(std::istream& is) {
  std::string line;
  std::optional<sequence_meta> meta;
  std::vector<T> elements;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      first = false;
      if (line.rfind("# bhgseq", 0) == 0) {
        meta = parse_header(line);
        continue;
      }
    }
    if (line.empty() || line[0] == '#') continue;
    if (meta) {
      elements.push_back(detail::parse_element<T>(line));
      continue;
    }
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream words(line);
    std::string w;
    while (words >> w) elements.push_back(detail::parse_element<T>(w));
  }
  if (meta) return basic_sequence<T>(std::move(elements), std::move(*meta));
  return basic_sequence<T>::from_unsorted(std::move(elements), sequence_meta{});
}

}  // namespace bhg
