#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace bhg::detail {

/// Splits [0, count) into `threads` contiguous ranges, runs fn(begin, end) on
/// each and returns the results in range order. threads <= 1 runs inline.
template <class Fn>
auto parallel_ranges(std::uint64_t count, unsigned threads, Fn&& fn) {
  using result = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
  std::vector<result> out(workers);
  if (workers == 1) {
    out[0] = fn(std::uint64_t{0}, count);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = count * w / workers;
      const std::uint64_t end = count * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          out[w] = fn(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace bhg::detail
