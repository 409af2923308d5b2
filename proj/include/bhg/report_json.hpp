#pragma once

// JSON renderings of the library's reports. Keys keep insertion order so
// identical runs produce byte-identical documents.

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "bhg/analysis.hpp"
#include "bhg/explicit.hpp"
#include "bhg/natural.hpp"
#include "bhg/packing.hpp"

namespace bhg {

using json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "bhgreport/v1";

namespace detail {

/// Numbers that fit in 64 bits stay numbers; larger ones become strings.
inline json natural_json(const natural& x) {
  if (auto v = to_u64(x)) return *v;
  return x.str();
}

inline json real_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace detail

inline json to_json(const bad_report& r) {
  json blocks = json::object();
  json population = json::object();
  for (const auto& b : r.blocks) {
    blocks[std::to_string(b.k)] = b.bad;
    population[std::to_string(b.k)] = b.population;
  }
  json j;
  j["schema"] = report_schema;
  j["kind"] = "bad_elements";
  j["h"] = r.h;
  j["g"] = r.g;
  j["variant"] = to_string(r.variant);
  j["N"] = r.N;
  j["bad"] = r.bad;
  j["blocks"] = blocks;
  j["block_population"] = population;
  j["violating_sums"] = r.violating_sums;
  j["pruned_count"] = r.pruned.size();
  j["original_count"] = r.original_count;
  return j;
}

inline json to_json(const fit_result& f) {
  return json{{"slope", detail::real_json(f.slope)},
              {"intercept", detail::real_json(f.intercept)},
              {"residual", detail::real_json(f.residual)}};
}

inline json to_json(const pipeline_report& r) {
  json j;
  j["schema"] = report_schema;
  j["kind"] = "pipeline";
  j["delta"] = r.delta;
  j["alpha"] = r.alpha;
  j["g"] = r.g;
  j["m"] = r.m;
  j["N"] = r.N;
  j["seed"] = r.seed;
  j["original_count"] = r.original_count;
  j["star_bad_count"] = r.star_bad_count;
  j["plain_bad_count"] = r.plain_bad_count;
  j["removed_count"] = r.removed_count;
  j["pruned_count"] = r.pruned_count;
  j["pruned_fraction"] = r.pruned_fraction;
  j["is_bhg"] = r.is_bhg;
  j["max_r3"] = r.max_r3;
  j["remark_holds"] = r.remark_holds;
  j["remark_checked"] = r.remark_checked;
  j["checkpoints"] = r.checkpoints;
  if (r.fit) {
    j["fit"] = to_json(*r.fit);
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = r.fit_error;
  }
  j["model_slope"] = detail::real_json(r.model_slope);
  j["target_slope"] = r.target_slope;
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"k", b.k},
                      {"lo", b.lo},
                      {"hi", b.hi},
                      {"population", b.population},
                      {"star_bad", b.star_bad},
                      {"plain_bad", b.plain_bad},
                      {"bad", b.bad},
                      {"ratio", b.ratio}});
  }
  j["blocks"] = blocks;
  j["removed"] = r.removed;
  return j;
}

inline json to_json(const explicit_diagnostics& d) {
  json j;
  j["schema"] = report_schema;
  j["kind"] = "diagnostics";
  j["h"] = d.h;
  j["l"] = d.l;
  j["j"] = d.j;
  j["r"] = d.r;
  j["log_n_upper"] = d.log_n_upper;
  j["log_N_lower"] = d.log_N_lower;
  j["ratio"] = d.ratio;
  j["window_term"] = d.window_term;
  j["window_floor"] = d.window_floor;
  j["window_term_ok"] = d.window_term_ok;
  j["tail_term"] = d.tail_term;
  j["tail_limit"] = d.tail_limit;
  j["tail_term_ok"] = d.tail_term_ok;
  j["threshold"] = d.threshold;
  j["flag"] = d.flag;
  return j;
}

inline json to_json(const param_map_result& p) {
  json j;
  j["schema"] = report_schema;
  j["kind"] = "param_map";
  j["h"] = p.h;
  j["epsilon"] = p.epsilon;
  j["delta"] = p.delta;
  j["c_h"] = detail::natural_json(p.c_h);
  j["g_theorem_e"] = p.g_theorem_e;
  j["g_star_threshold"] = p.g_star_threshold;
  j["g_theorem3"] = p.g_theorem3;
  j["minimal_g_star"] = p.minimal_g_star;
  j["minimal_g_theorem3"] = p.minimal_g_theorem3;
  return j;
}

inline json to_json(const bhg_check& c, int h, std::uint64_t g, std::uint64_t N) {
  json j;
  j["schema"] = report_schema;
  j["kind"] = "verify";
  j["h"] = h;
  j["g"] = g;
  j["N"] = N;
  j["holds"] = c.holds;
  j["max_count"] = c.max_count;
  j["witness"] = c.witness ? json(*c.witness) : json(nullptr);
  j["witness_tuples"] = c.witness_tuples;
  return j;
}

}  // namespace bhg
