#pragma once

// Density measurement, the g <-> epsilon parameter maps, and desk-scale runs
// of the alteration argument for h = 3.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bhg/detail/parallel.hpp"
#include "bhg/errors.hpp"
#include "bhg/natural.hpp"
#include "bhg/packing.hpp"
#include "bhg/randmodel.hpp"
#include "bhg/repcount.hpp"
#include "bhg/sequence.hpp"

namespace bhg {

/// A(x) = |A ∩ [1, x]|.
inline std::uint64_t count_upto(const sequence& a, std::uint64_t x) {
  auto lo = std::lower_bound(a.begin(), a.end(), std::uint64_t{1});
  auto hi = std::upper_bound(a.begin(), a.end(), x);
  return hi > lo ? static_cast<std::uint64_t>(hi - lo) : 0;
}

/// x = m 4^t <= N, dropping the warm-up x < 10 m.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t m, std::uint64_t N) {
  if (m < 1) throw domain_error("checkpoints need m >= 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = m; x <= N; x *= 4) {
    if (x >= 10 * m) out.push_back(x);
    if (x > UINT64_MAX / 4) break;
  }
  return out;
}

struct fit_result {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // max |A_fit(x) / A(x) - 1|
};

namespace detail {

inline fit_result log_log_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 4) throw domain_error("exponent fit needs at least 4 checkpoints");
  bool varied = false;
  for (double y : ys) {
    if (!(y > 0)) throw domain_error("exponent fit needs A(x) >= 1 at every checkpoint");
    if (y != ys.front()) varied = true;
  }
  if (!varied) throw domain_error("degenerate fit: A(x) is constant over the checkpoints");
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0)) throw domain_error("degenerate fit: checkpoints must be distinct");
  fit_result f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double model = std::exp(f.intercept + f.slope * std::log(xs[i]));
    f.residual = std::max(f.residual, std::abs(model / ys[i] - 1.0));
  }
  return f;
}

}  // namespace detail

/// Least squares of log A(x) on log x.
inline fit_result exponent_fit(const sequence& a, const std::vector<std::uint64_t>& checkpoints) {
  std::vector<double> xs, ys;
  for (std::uint64_t x : checkpoints) {
    xs.push_back(static_cast<double>(x));
    ys.push_back(static_cast<double>(count_upto(a, x)));
  }
  return detail::log_log_fit(xs, ys);
}

/// E A(x) = sum_{m <= n <= x} n^{-alpha} under S(alpha, m), at each checkpoint.
/// Exact summation to 10^7, Euler-Maclaurin beyond.
inline std::vector<double> expected_counts(const random_model& model, const std::vector<std::uint64_t>& checkpoints) {
  constexpr std::uint64_t exact_limit = 10'000'000;
  std::vector<double> out;
  detail::compensated_sum s;
  std::uint64_t next = model.m;
  auto f = [&](double x) { return std::pow(x, -model.alpha); };
  for (std::uint64_t x : checkpoints) {
    const std::uint64_t stop = std::min(x, exact_limit);
    for (; next <= stop; ++next) s.add(f(static_cast<double>(next)));
    double v = s.value();
    if (x > exact_limit) {
      const double a = static_cast<double>(std::max(exact_limit, model.m - 1));
      const double b = static_cast<double>(x);
      const double e = 1.0 - model.alpha;
      v += (std::pow(b, e) - std::pow(a, e)) / e + (f(b) - f(a)) / 2.0;
    }
    out.push_back(v);
  }
  return out;
}

/// Slope the same fit would report on E A(x) instead of A(x): the finite-range
/// target, which differs from 1 - alpha through the cutoff at m.
inline double model_slope(const random_model& model, const std::vector<std::uint64_t>& checkpoints) {
  std::vector<double> xs;
  for (std::uint64_t x : checkpoints) xs.push_back(static_cast<double>(x));
  return detail::log_log_fit(xs, expected_counts(model, checkpoints)).slope;
}

// Parameter maps -------------------------------------------------------------

/// c_h = 2^{h-3} h ((h-1)!)^2.
inline natural c_h(int h) {
  if (h < 2) throw domain_error("c_h requires h >= 2");
  natural f = 1;
  for (int k = 2; k < h; ++k) f *= k;
  natural c = natural(h) * f * f;
  if (h >= 3) {
    c <<= static_cast<unsigned>(h - 3);
  } else {
    c >>= 1;
  }
  return c;
}

namespace detail {

inline bool near_integer(double t, double& nearest) {
  nearest = std::round(t);
  return std::abs(t - nearest) <= 1e-9 * std::max(1.0, std::abs(t));
}

}  // namespace detail

/// Smallest integer g >= 1 with g > t. Thresholds that are integers up to
/// rounding noise count as integers.
inline std::uint64_t minimal_g_above(double t) {
  if (!std::isfinite(t)) throw domain_error("threshold is not finite");
  if (t < 1.0) return 1;
  double r = 0;
  const double base = detail::near_integer(t, r) ? r : std::floor(t);
  return static_cast<std::uint64_t>(base) + 1;
}

struct param_map_result {
  int h = 2;
  double epsilon = 0;
  double delta = 0;
  natural c_h;
  std::uint64_t g_theorem_e = 0;   // ceil(c_h / epsilon)
  double g_star_threshold = 0;     // ((h-1)/(2h-3) - (h-1)delta) / ((h-3)/(2h-3) + h delta)
  double g_theorem3 = 0;           // 2/(9 delta) - 2/3
  std::uint64_t minimal_g_star = 1;
  std::uint64_t minimal_g_theorem3 = 1;
};

inline double g_star_threshold(int h, double delta) {
  const double k = 2.0 * h - 3.0;
  const double num = (h - 1) / k - (h - 1) * delta;
  const double den = (h - 3) / k + h * delta;
  if (den == 0.0) throw domain_error("star threshold denominator vanishes");
  return num / den;
}

inline double g_theorem3(double delta) {
  if (!(delta > 0)) throw domain_error("delta must be > 0");
  return 2.0 / (9.0 * delta) - 2.0 / 3.0;
}

inline param_map_result param_map(int h, double epsilon, double delta) {
  if (h < 2) throw domain_error("order h must be >= 2");
  if (!(epsilon > 0) || !(delta > 0)) throw domain_error("epsilon and delta must be > 0");
  param_map_result p;
  p.h = h;
  p.epsilon = epsilon;
  p.delta = delta;
  p.c_h = c_h(h);
  const double q = p.c_h.convert_to<double>() / epsilon;
  double r = 0;
  const double g = detail::near_integer(q, r) ? r : std::ceil(q);
  if (!(g < 1.8e19)) throw range_error("g_theorem_e does not fit in 64 bits");
  p.g_theorem_e = static_cast<std::uint64_t>(g);
  p.g_star_threshold = g_star_threshold(h, delta);
  p.g_theorem3 = g_theorem3(delta);
  p.minimal_g_star = minimal_g_above(p.g_star_threshold);
  p.minimal_g_theorem3 = minimal_g_above(p.g_theorem3);
  return p;
}

// Bad-set ratios --------------------------------------------------------------

struct ratio_row {
  std::uint64_t x = 0;
  std::uint64_t count = 0;  // A(x)
  std::uint64_t bad = 0;    // B(x)
  double ratio = 0;         // B(x) / A(x), 0 when A(x) = 0
};

/// (x, A(x), B(x)) at each checkpoint, B being a sorted subset of A.
inline std::vector<ratio_row> bad_ratios(const sequence& a, const std::vector<std::uint64_t>& bad,
                                         const std::vector<std::uint64_t>& checkpoints) {
  std::vector<ratio_row> out;
  for (std::uint64_t x : checkpoints) {
    ratio_row row;
    row.x = x;
    row.count = count_upto(a, x);
    auto lo = std::lower_bound(bad.begin(), bad.end(), std::uint64_t{1});
    auto hi = std::upper_bound(bad.begin(), bad.end(), x);
    row.bad = hi > lo ? static_cast<std::uint64_t>(hi - lo) : 0;
    row.ratio = row.count ? static_cast<double>(row.bad) / static_cast<double>(row.count) : 0.0;
    out.push_back(row);
  }
  return out;
}

// h = 3 alteration pipeline ---------------------------------------------------

struct pipeline_block {
  unsigned k = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t population = 0;
  std::uint64_t star_bad = 0;
  std::uint64_t plain_bad = 0;
  std::uint64_t bad = 0;  // union
  double ratio = 0;       // star_bad / population
};

struct pipeline_report {
  double delta = 0;
  double alpha = 0;
  std::uint64_t g = 2;
  std::uint64_t m = 2;
  std::uint64_t N = 0;
  std::uint64_t seed = 0;

  std::uint64_t original_count = 0;
  std::uint64_t star_bad_count = 0;
  std::uint64_t plain_bad_count = 0;
  std::uint64_t removed_count = 0;
  std::uint64_t pruned_count = 0;
  double pruned_fraction = 0;  // removed / original

  bool is_bhg = false;
  std::uint64_t max_r3 = 0;         // on [0, N] after pruning
  bool remark_holds = false;        // r_3 = r*_3 on [0, 3N] after pruning
  std::uint64_t remark_checked = 0; // n with r_3 >= 2 that needed a packing

  std::vector<std::uint64_t> checkpoints;
  std::optional<fit_result> fit;    // pruned sequence; empty if degenerate
  std::string fit_error;
  double model_slope = 0;           // same fit on E A(x)
  double target_slope = 0;          // 1 - alpha

  std::vector<pipeline_block> blocks;
  std::vector<ratio_row> rows;      // x, A(x) of the sample, B(x) removed
  std::vector<std::uint64_t> removed;
  sequence original;
  sequence pruned;
};

/// Requires g > 2/(9 delta) - 2/3, m >= 2 and N >= 100 m.
inline pipeline_report pipeline_theorem3(double delta, std::uint64_t g, std::uint64_t m, std::uint64_t N,
                                         std::uint64_t seed, unsigned threads = 1) {
  if (!(delta > 0) || !(delta < 1.0 / 3.0)) throw domain_error("delta must lie in (0, 1/3)");
  if (!(delta * (9.0 * static_cast<double>(g) + 6.0) > 2.0)) {
    throw domain_error("g must exceed 2/(9 delta) - 2/3");
  }
  if (m < 2) throw domain_error("pipeline requires m >= 2");
  if (N / 100 < m) throw domain_error("pipeline requires N >= 100 m");

  pipeline_report rep;
  rep.delta = delta;
  rep.alpha = 2.0 / 3.0 + delta;
  rep.g = g;
  rep.m = m;
  rep.N = N;
  rep.seed = seed;
  const random_model model(rep.alpha, m, seed);

  rep.original = sample(model, N, threads);
  rep.original_count = rep.original.size();

  const bad_report star = bad_elements(rep.original, 3, g, N, badness::star, threads);
  const bad_report plain = bad_elements(rep.original, 2, 1, N, badness::plain, threads);
  rep.star_bad_count = star.bad.size();
  rep.plain_bad_count = plain.bad.size();
  rep.removed = merge_bad(star, plain);
  rep.removed_count = rep.removed.size();

  bad_report merged = star;
  merged.bad = rep.removed;
  rep.pruned = prune(rep.original, merged);
  rep.pruned.meta().h = 3;
  rep.pruned_count = rep.pruned.size();
  rep.pruned_fraction =
      rep.original_count ? static_cast<double>(rep.removed_count) / static_cast<double>(rep.original_count) : 0.0;

  const bhg_check check = is_bhg(rep.pruned, 3, g, N);
  rep.is_bhg = check.holds;
  rep.max_r3 = check.max_count;
  if (!check.holds) {
    throw internal_error("pipeline: pruned sequence violates B_3[g] at n = " + std::to_string(*check.witness));
  }

  // Sidon after the h = 2 prune, so any two representations sharing a value
  // coincide: r_3 and r*_3 must agree.
  rep.remark_holds = true;
  const rep_profile three = profile(rep.pruned, 3, 3 * N);
  for (const auto& [n, c] : three.nonzero()) {
    if (c < 2) continue;
    ++rep.remark_checked;
    if (!disjoint_at_least(rep.pruned, 3, n, c)) {
      rep.remark_holds = false;
      break;
    }
  }

  rep.checkpoints = default_checkpoints(m, N);
  rep.target_slope = 1.0 - rep.alpha;
  try {
    rep.fit = exponent_fit(rep.pruned, rep.checkpoints);
  } catch (const domain_error& e) {
    rep.fit_error = e.what();
  }
  try {
    rep.model_slope = model_slope(model, rep.checkpoints);
  } catch (const domain_error&) {
    rep.model_slope = std::nan("");
  }

  const auto star_blocks = star.blocks;
  const auto plain_blocks = detail::block_stats(std::span<const std::uint64_t>(rep.original.elements()),
                                                plain.bad, 3, N);
  const auto union_blocks = detail::block_stats(std::span<const std::uint64_t>(rep.original.elements()),
                                                rep.removed, 3, N);
  for (std::size_t i = 0; i < star_blocks.size(); ++i) {
    pipeline_block b;
    b.k = star_blocks[i].k;
    b.lo = star_blocks[i].lo;
    b.hi = star_blocks[i].hi;
    b.population = star_blocks[i].population;
    b.star_bad = star_blocks[i].bad;
    b.plain_bad = plain_blocks[i].bad;
    b.bad = union_blocks[i].bad;
    b.ratio = b.population ? static_cast<double>(b.star_bad) / static_cast<double>(b.population) : 0.0;
    rep.blocks.push_back(b);
  }
  rep.rows = bad_ratios(rep.original, rep.removed, rep.checkpoints);
  return rep;
}

// Monte Carlo frequency of r* violations ---------------------------------------

/// sum_{n = max(m, h)}^{N} erla_bound(h, alpha, n)^{g+1}.
inline double fla_union_bound(int h, double alpha, std::uint64_t g, std::uint64_t m, std::uint64_t N) {
  detail::compensated_sum s;
  for (std::uint64_t n = std::max<std::uint64_t>(m, static_cast<std::uint64_t>(h)); n <= N; ++n) {
    s.add(std::pow(erla_bound(h, alpha, n), static_cast<double>(g + 1)));
  }
  return s.value();
}

struct violation_row {
  std::uint64_t m = 0;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;  // samples with some n <= N and r*(n) >= g+1
  double frequency = 0;
  double standard_error = 0;     // binomial
  double union_bound = 0;
};

/// Does A ∩ [1, N] contain n <= N with r*_{h,A}(n) >= g+1?
inline bool has_star_violation(const sequence& a, int h, std::uint64_t g, std::uint64_t N) {
  const rep_profile prof = profile(a, h, N);
  for (const auto& [n, c] : prof.nonzero()) {
    if (c >= g + 1 && disjoint_at_least(a, h, n, g + 1)) return true;
  }
  return false;
}

/// alpha = 1 - 1/h + epsilon; requires g >= ceil(2/(h epsilon)). Seeds are
/// first_seed, first_seed + 1, ... for every m.
inline std::vector<violation_row> montecarlo_star_violation(int h, double epsilon, std::uint64_t g,
                                                            const std::vector<std::uint64_t>& m_grid,
                                                            std::uint64_t N, std::uint64_t trials,
                                                            std::uint64_t first_seed = 1, unsigned threads = 1) {
  detail::require_order(h);
  const double alpha = 1.0 - 1.0 / h + epsilon;
  if (!(epsilon > 0) || !(alpha < 1.0)) throw domain_error("epsilon must lie in (0, 1/h)");
  const double need = 2.0 / (h * epsilon);
  double r = 0;
  const double gmin = detail::near_integer(need, r) ? r : std::ceil(need);
  if (static_cast<double>(g) < gmin) throw domain_error("g must be >= ceil(2/(h epsilon))");
  if (trials < 1) throw domain_error("trials must be >= 1");

  std::vector<violation_row> out;
  for (std::uint64_t m : m_grid) {
    auto parts = detail::parallel_ranges(trials, threads, [&](std::uint64_t begin, std::uint64_t end) {
      std::uint64_t hits = 0;
      for (std::uint64_t t = begin; t < end; ++t) {
        const sequence a = sample(random_model(alpha, m, first_seed + t), N);
        if (has_star_violation(a, h, g, N)) ++hits;
      }
      return hits;
    });
    violation_row row;
    row.m = m;
    row.trials = trials;
    for (auto p : parts) row.violations += p;
    row.frequency = static_cast<double>(row.violations) / static_cast<double>(trials);
    row.standard_error = std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(trials));
    row.union_bound = fla_union_bound(h, alpha, g, m, N);
    out.push_back(row);
  }
  return out;
}

}  // namespace bhg
