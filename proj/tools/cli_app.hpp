#pragma once

// `bhg` command-line front end. run_cli() is the whole program; main() only
// forwards to it so the tests can drive it in-process.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 budget or precision limit.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhg/bhg.hpp"

namespace bhg::cli {

namespace detail {

/// "500_000" -> "500000" before CLI11 converts the value.
inline CLI::Validator underscores() {
  return CLI::Validator(
      [](std::string& s) {
        s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
        return std::string();
      },
      "", "underscores");
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw domain_error("cannot write '" + path + "'");
  return os;
}

inline sequence load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw domain_error("cannot read '" + path + "'");
  return read_sequence<std::uint64_t>(is);
}

inline std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(parse_u64(item));
  }
  return out;
}

inline std::string tuple_text(const std::vector<std::uint64_t>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

inline std::string with_extension(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

inline void check_format(const std::string& format) {
  if (format != "text" && format != "json" && format != "csv") throw domain_error("unknown format '" + format + "'");
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"B_h[g] sequence constructions and experiments", "bhg"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");
  app.set_help_all_flag("--help-all");
  const auto num = detail::underscores();

  std::string out_path, in_path, format = "text";
  unsigned threads = 1;
  int h = 2;

  // greedy
  std::uint64_t limit = 0;
  auto* greedy = app.add_subcommand("greedy", "lexicographically greedy B_h[1] subset of [0, limit)");
  greedy->add_option("--h", h, "order")->transform(num)->required();
  greedy->add_option("--limit", limit, "exclusive upper end")->transform(num)->required();
  greedy->add_option("--out", out_path, "sequence file");

  // bose
  std::uint64_t p = 0;
  auto* bose = app.add_subcommand("bose", "Bose-Chowla B_h[1] set with p elements");
  bose->add_option("--h", h, "order")->transform(num)->required();
  bose->add_option("--p", p, "prime")->transform(num)->required();
  bose->add_option("--out", out_path, "sequence file");

  // explicit
  std::uint64_t l = 2;
  std::string max_text;
  unsigned precision = base_schedule::default_precision;
  bool extend = false;
  auto* expl = app.add_subcommand("explicit", "explicit construction up to --max");
  expl->add_option("--h", h, "order")->transform(num)->required();
  expl->add_option("--l", l, "window length")->transform(num)->required();
  expl->add_option("--max", max_text, "enumerate elements <= max")->required();
  expl->add_option("--precision", precision, "decimal digits for the bases")->transform(num);
  expl->add_flag("--extend", extend, "greedily extend the digit sets");
  expl->add_option("--out", out_path, "sequence file");

  // sample
  double alpha = 0.75;
  std::uint64_t m = 1, N = 0, seed = 0;
  auto* samp = app.add_subcommand("sample", "sample S(alpha, m) up to N");
  samp->add_option("--alpha", alpha, "density parameter in (0,1)")->transform(num)->required();
  samp->add_option("--m", m, "cutoff")->transform(num)->required();
  samp->add_option("--N", N, "truncation bound")->transform(num)->required();
  samp->add_option("--seed", seed, "seed")->transform(num);
  samp->add_option("--h", h, "order recorded in the header")->transform(num);
  samp->add_option("--threads", threads, "worker threads")->transform(num);
  samp->add_option("--out", out_path, "sequence file");

  // verify
  std::uint64_t g = 1;
  std::optional<std::uint64_t> max_n;
  auto* verify = app.add_subcommand("verify", "check r_{h,A}(n) <= g for n <= max");
  verify->add_option("--h", h, "order")->transform(num)->required();
  verify->add_option("--g", g, "multiplicity")->transform(num)->required();
  verify->add_option("--max", max_n, "largest n checked (default: h * max element)")->transform(num);
  verify->add_option("--in", in_path, "sequence file")->required();
  verify->add_option("--format", format, "text or json");
  verify->add_option("--out", out_path, "profile CSV");

  // pack
  std::optional<std::uint64_t> n_opt;
  auto* pack = app.add_subcommand("pack", "r and r* for one n, or a table up to --max");
  pack->add_option("--h", h, "order")->transform(num)->required();
  pack->add_option("--n", n_opt, "target")->transform(num);
  pack->add_option("--max", max_n, "tabulate every n <= max")->transform(num);
  pack->add_option("--in", in_path, "sequence file")->required();
  pack->add_option("--format", format, "text or json");
  pack->add_option("--out", out_path, "CSV table (with --max)");

  // prune
  std::string variant = "plain";
  std::string report_path;
  std::optional<std::uint64_t> N_opt;
  auto* prn = app.add_subcommand("prune", "remove (g+1)_h-bad elements");
  prn->add_option("--h", h, "order")->transform(num)->required();
  prn->add_option("--g", g, "multiplicity")->transform(num)->required();
  prn->add_option("--N", N_opt, "truncation bound (default: header N or max element)")->transform(num);
  prn->add_option("--variant", variant, "plain or star");
  prn->add_option("--in", in_path, "sequence file")->required();
  prn->add_option("--out", out_path, "pruned sequence file");
  prn->add_option("--report", report_path, "bad-element report (JSON)");
  prn->add_option("--threads", threads, "worker threads")->transform(num);

  // fit
  std::string checkpoint_text;
  std::optional<std::uint64_t> m_opt;
  auto* fit = app.add_subcommand("fit", "density exponent of a sequence");
  fit->add_option("--in", in_path, "sequence file")->required();
  fit->add_option("--checkpoints", checkpoint_text, "comma-separated x values");
  fit->add_option("--m", m_opt, "grid base (default: header m or 1)")->transform(num);
  fit->add_option("--N", N_opt, "grid end (default: header N or max element)")->transform(num);
  fit->add_option("--format", format, "text or json");

  // pipeline
  double delta = 0.1;
  std::string csv_path, pruned_path;
  auto* pipe = app.add_subcommand("pipeline", "sample, two-stage prune and fit for h = 3");
  pipe->add_option("--delta", delta, "alpha = 2/3 + delta")->transform(num)->required();
  pipe->add_option("--g", g, "multiplicity")->transform(num)->required();
  pipe->add_option("--m", m, "cutoff")->transform(num)->required();
  pipe->add_option("--N", N, "truncation bound")->transform(num)->required();
  pipe->add_option("--seed", seed, "seed")->transform(num);
  pipe->add_option("--threads", threads, "worker threads")->transform(num);
  pipe->add_option("--out", out_path, "report JSON")->required();
  pipe->add_option("--csv", csv_path, "checkpoint CSV (default: report path with .csv)");
  pipe->add_option("--pruned-out", pruned_path, "pruned sequence file");

  // diag
  std::size_t j = 0;
  auto* diag = app.add_subcommand("diag", "density bounds of the explicit construction at scale j");
  diag->add_option("--h", h, "order")->transform(num)->required();
  diag->add_option("--l", l, "window length")->transform(num)->required();
  diag->add_option("--j", j, "scale index (j >= l)")->transform(num)->required();
  diag->add_option("--precision", precision, "decimal digits")->transform(num);
  diag->add_option("--format", format, "text or json");
  diag->add_option("--out", out_path, "JSON file");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << app.help();
        return 0;
      }
      err << "bhg: " << e.what() << '\n';
      return 2;
    }
    detail::check_format(format);

    auto save = [&](const auto& s) {
      if (out_path.empty()) return std::string();
      auto os = detail::open_out(out_path);
      write_sequence(os, s);
      return " -> " + out_path;
    };

    if (*greedy) {
      const bh1_set s = greedy_bh1(h, limit);
      sequence_meta meta;
      meta.source = "greedy";
      meta.h = h;
      meta.N = natural(limit - 1);
      const sequence seq(s.elements, meta);
      out << "greedy h=" << h << " limit=" << limit << " size=" << seq.size() << save(seq) << '\n';
      return 0;
    }
    if (*bose) {
      const bh1_set s = bose_chowla(h, p);
      sequence_meta meta;
      meta.source = "bose_chowla";
      meta.h = h;
      meta.N = s.bound - 1;
      const sequence seq(s.elements, meta);
      out << "bose h=" << h << " p=" << p << " size=" << seq.size() << " max=" << seq.elements().back() << save(seq)
          << '\n';
      return 0;
    }
    if (*expl) {
      const explicit_params params(h, l, precision, extend);
      const big_sequence seq = enumerate_upto(params, parse_natural(max_text));
      out << "explicit h=" << h << " l=" << l << " max=" << max_text << " size=" << seq.size() << save(seq) << '\n';
      return 0;
    }
    if (*samp) {
      sequence seq = sample(random_model(alpha, m, seed), N, threads);
      seq.meta().h = h;
      out << "sample alpha=" << format_real(alpha) << " m=" << m << " seed=" << seed << " N=" << N
          << " size=" << seq.size() << save(seq) << '\n';
      return 0;
    }
    if (*verify) {
      const sequence a = detail::load(in_path);
      const std::uint64_t top = max_n ? *max_n : (a.empty() ? 0 : a.elements().back() * static_cast<std::uint64_t>(h));
      const bhg_check c = is_bhg(a, h, g, top);
      if (!out_path.empty()) {
        auto os = detail::open_out(out_path);
        write_profile_csv(os, profile(a, h, top));
      }
      if (format == "json") {
        out << to_json(c, h, g, top).dump() << '\n';
      } else {
        out << "verify h=" << h << " g=" << g << " N=" << top << ": " << (c.holds ? "OK" : "FAIL")
            << " max_count=" << c.max_count;
        if (c.witness) {
          out << " witness n=" << *c.witness << " r=" << c.witness_tuples.size();
          for (const auto& t : c.witness_tuples) out << ' ' << detail::tuple_text(t);
        }
        out << '\n';
      }
      return c.holds ? 0 : 1;
    }
    if (*pack) {
      const sequence a = detail::load(in_path);
      if (max_n) {
        const rep_profile prof = profile(a, h, *max_n);
        std::ostringstream table;
        table << "n,r,rstar\n";
        for (const auto& [n, c] : prof.nonzero()) table << n << ',' << c << ',' << disjoint_count(a, h, n) << '\n';
        if (!out_path.empty()) {
          auto os = detail::open_out(out_path);
          os << table.str();
        }
        out << "pack h=" << h << " max=" << *max_n << " nonzero=" << prof.nonzero().size()
            << (out_path.empty() ? "" : " -> " + out_path) << '\n';
        return 0;
      }
      if (!n_opt) throw domain_error("pack needs --n or --max");
      const rep_count r = count_reps(a, h, *n_opt);
      const tuple_list chosen = disjoint_packing(a.elements(), h, *n_opt);
      if (format == "json") {
        json jj;
        jj["schema"] = report_schema;
        jj["kind"] = "pack";
        jj["h"] = h;
        jj["n"] = *n_opt;
        jj["r"] = r.count;
        jj["rstar"] = chosen.size();
        jj["packing"] = chosen;
        out << jj.dump() << '\n';
      } else {
        out << "pack h=" << h << " n=" << *n_opt << " r=" << r.count << " rstar=" << chosen.size();
        for (const auto& t : chosen) out << ' ' << detail::tuple_text(t);
        out << '\n';
      }
      return 0;
    }
    if (*prn) {
      const sequence a = detail::load(in_path);
      badness v;
      if (variant == "plain") {
        v = badness::plain;
      } else if (variant == "star") {
        v = badness::star;
      } else {
        throw domain_error("variant must be plain or star");
      }
      std::uint64_t bound = 0;
      if (N_opt) {
        bound = *N_opt;
      } else if (a.meta().N && to_u64(*a.meta().N)) {
        bound = *to_u64(*a.meta().N);
      } else if (!a.empty()) {
        bound = a.elements().back();
      }
      const bad_report rep = bad_elements(a, h, g, bound, v, threads);
      if (!report_path.empty()) {
        auto os = detail::open_out(report_path);
        os << to_json(rep).dump(2) << '\n';
      }
      out << "prune h=" << h << " g=" << g << " variant=" << variant << " N=" << bound << " original=" << a.size()
          << " bad=" << rep.bad.size() << " pruned=" << rep.pruned.size() << save(rep.pruned) << '\n';
      return 0;
    }
    if (*fit) {
      const sequence a = detail::load(in_path);
      std::vector<std::uint64_t> cps;
      if (!checkpoint_text.empty()) {
        cps = detail::parse_list(checkpoint_text);
      } else {
        const std::uint64_t base = m_opt ? *m_opt : a.meta().m.value_or(1);
        std::uint64_t end = 0;
        if (N_opt) {
          end = *N_opt;
        } else if (a.meta().N && to_u64(*a.meta().N)) {
          end = *to_u64(*a.meta().N);
        } else if (!a.empty()) {
          end = a.elements().back();
        }
        cps = default_checkpoints(base, end);
      }
      const fit_result f = exponent_fit(a, cps);
      std::optional<double> expected;
      if (a.meta().alpha && a.meta().m) expected = model_slope(random_model(*a.meta().alpha, *a.meta().m), cps);
      if (format == "json") {
        json jj;
        jj["schema"] = report_schema;
        jj["kind"] = "fit";
        jj["checkpoints"] = cps;
        jj["fit"] = to_json(f);
        jj["model_slope"] = expected ? json(*expected) : json(nullptr);
        out << jj.dump() << '\n';
      } else {
        out << "fit points=" << cps.size() << " slope=" << format_real(f.slope)
            << " intercept=" << format_real(f.intercept) << " residual=" << format_real(f.residual);
        if (expected) out << " model_slope=" << format_real(*expected);
        out << '\n';
      }
      return 0;
    }
    if (*pipe) {
      const pipeline_report rep = pipeline_theorem3(delta, g, m, N, seed, threads);
      {
        auto os = detail::open_out(out_path);
        os << to_json(rep).dump(2) << '\n';
      }
      const std::string csv = csv_path.empty() ? detail::with_extension(out_path, ".csv") : csv_path;
      {
        auto os = detail::open_out(csv);
        os << "x,A,B\n";
        for (const auto& row : rep.rows) os << row.x << ',' << row.count << ',' << row.bad << '\n';
      }
      if (!pruned_path.empty()) {
        auto os = detail::open_out(pruned_path);
        write_sequence(os, rep.pruned);
      }
      out << "pipeline delta=" << format_real(delta) << " g=" << g << " m=" << m << " N=" << N << " seed=" << seed
          << " original=" << rep.original_count << " pruned=" << rep.pruned_count
          << " is_bhg=" << (rep.is_bhg ? "true" : "false")
          << " slope=" << (rep.fit ? format_real(rep.fit->slope) : std::string("n/a")) << " -> " << out_path << '\n';
      return 0;
    }
    if (*diag) {
      const explicit_diagnostics d = diagnostics(h, l, j, precision);
      if (!out_path.empty()) {
        auto os = detail::open_out(out_path);
        os << to_json(d).dump(2) << '\n';
      }
      if (format == "json") {
        out << to_json(d).dump() << '\n';
      } else {
        out << "diag h=" << h << " l=" << l << " j=" << j << " ratio=" << format_real(d.ratio)
            << " threshold=" << format_real(d.threshold) << " flag=" << (d.flag ? "true" : "false") << '\n';
      }
      return 0;
    }
    return 2;
  } catch (const budget_error& e) {
    err << "bhg: budget: " << e.what() << '\n';
    return 3;
  } catch (const precision_error& e) {
    err << "bhg: precision: " << e.what() << '\n';
    return 3;
  } catch (const internal_error& e) {
    err << "bhg: internal: " << e.what() << '\n';
    return 1;
  } catch (const error& e) {
    err << "bhg: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bhg::cli
