#pragma once

// Command-line front end. `run` is the whole program minus argv handling so
// that tests can drive it with in-memory streams.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpn/cache.hpp"
#include "wpn/congruence.hpp"
#include "wpn/diophantine.hpp"
#include "wpn/distribution.hpp"
#include "wpn/io.hpp"
#include "wpn/perfect.hpp"
#include "wpn/source.hpp"
#include "wpn/within.hpp"

namespace wpn::cli {

enum class OutputFormat { csv, json, ndjson, table };

struct RunConfig {
  u64 limit = 0;  // 0: subcommand default
  u64 segment_length = kDefaultSegmentLength;
  std::optional<std::filesystem::path> cache_dir;
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 1;
  CountingConvention convention;

  void validate() const {
    if (segment_length < (u64{1} << 10)) fail(ErrorKind::invalid_argument, "segment length must be >= 1024");
    if (limit != 0 && limit < 2) fail(ErrorKind::invalid_argument, "limit must be >= 2");
    if (threads < 1) fail(ErrorKind::invalid_argument, "threads must be >= 1");
  }

  SigmaSource source() const {
    SourceOptions opts;
    opts.segment_length = segment_length;
    opts.threads = threads;
    opts.cache_dir = cache_dir;
    opts.budget = std::max(kDefaultSegmentBudget, segment_length);
    return SigmaSource(opts);
  }
};

/// "20000000", "2e7", "1.5e3" -> exact integer.
inline u64 parse_count(const std::string& text) {
  auto e = text.find_first_of("eE");
  if (e == std::string::npos) {
    Fraction f = parse_fraction(text);
    if (!f.is_integer()) fail(ErrorKind::invalid_argument, "expected an integer, got '" + text + "'");
    return f.num;
  }
  Fraction mantissa = parse_fraction(text.substr(0, e));
  i64 exponent = parse_integer(text.substr(e + 1));
  if (exponent < 0 || exponent > 19) fail(ErrorKind::invalid_argument, "exponent out of range in '" + text + "'");
  u64 num = mantissa.num;
  for (i64 i = 0; i < exponent; ++i) num = checked_mul(num, 10);
  if (num % mantissa.den != 0) fail(ErrorKind::invalid_argument, "expected an integer, got '" + text + "'");
  return num / mantissa.den;
}

inline std::vector<u64> parse_count_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_count(item));
  if (out.empty()) fail(ErrorKind::invalid_argument, "empty checkpoint list");
  return out;
}

inline std::vector<Fraction> parse_fraction_list(const std::string& text) {
  std::vector<Fraction> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_fraction(item));
  return out;
}

namespace detail {

inline u64 require_limit(const RunConfig& cfg, u64 fallback) { return cfg.limit ? cfg.limit : fallback; }

inline void write_census_csv(std::ostream& out, const std::vector<SolutionRecord>& recs) {
  out << "n,sigma_n,classification,p,m\n";
  for (const auto& r : recs) {
    out << r.n << ',' << r.sigma_n << ',' << to_string(r.classification) << ',';
    if (!r.witnesses.empty()) out << r.witnesses.front().p << ',' << r.witnesses.front().m;
    else out << ',';
    out << '\n';
  }
}

inline void emit_records(std::ostream& out, OutputFormat fmt, const std::vector<SolutionRecord>& recs) {
  switch (fmt) {
    case OutputFormat::json: io::write_solutions_json(out, recs); break;
    case OutputFormat::ndjson:
      for (const auto& r : recs) io::write_solution_ndjson(out, r);
      break;
    default: write_census_csv(out, recs); break;
  }
}

}  // namespace detail

/// Runs one invocation. Exit status: 0 ok, 1 validation error, 2
/// capability/overflow/io error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sum-of-divisors sieve and within-perfect number counting", "wpn"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying option defaults");

  RunConfig cfg;
  std::string limit_text, format_text = "", cache_dir_text;
  bool strict = true, include_one = true;
  std::string threshold_at = "n";
  app.add_option("--limit", limit_text, "upper bound x (accepts 2e7)");
  app.add_option("--segment-length", cfg.segment_length, "sieve segment length (>= 1024)");
  app.add_option("--cache-dir", cache_dir_text, "directory for sieve cache files")->envname("WPN_CACHE_DIR");
  app.add_option("--format", format_text, "csv | json | ndjson | table")
      ->check(CLI::IsMember({"csv", "json", "ndjson", "table"}));
  app.add_option("--threads", cfg.threads, "worker threads for sieving");
  app.add_option("--strict", strict, "strict inequality |sigma(n) - l n| < k (default true)");
  app.add_option("--threshold-at", threshold_at, "evaluate k at n (W) or at x (W-tilde)")
      ->check(CLI::IsMember({"n", "x"}));
  app.add_option("--include-one", include_one, "count n = 1 (default true)");

  // per-subcommand state
  std::string ell = "2", threshold = "pow:1/2", checkpoints_text, grid_text = "1.5,2,2.5,3";
  std::string regime_text = "sublinear", c_text = "1/2", target_text = "2";
  u64 a = 2, b = 1, depth = 4;
  i64 k = 1;
  std::string lo_text = "1", hi_text, out_path, verify_path, x_text = "1000000", xmax_text = "10000",
              search_text = "10000";

  auto* sieve = app.add_subcommand("sieve", "sigma and smallest prime factor over [lo, hi]");
  sieve->add_option("--lo", lo_text);
  sieve->add_option("--hi", hi_text);
  sieve->add_option("--out", out_path, "write a binary cache file instead of CSV");
  sieve->add_option("--verify", verify_path, "load a cache file and check it against a fresh sieve");

  auto* count = app.add_subcommand("count", "#W(l; k; x)");
  count->add_option("--ell", ell, "target ratio a/b or exact decimal");
  count->add_option("--threshold", threshold, "pow:c | const:k0 | lin:c | xlog | ylogy | table:y=k,...");

  auto* series_cmd = app.add_subcommand("series", "#W(l; k; x) / (x / log x) at checkpoints");
  series_cmd->add_option("--ell", ell);
  series_cmd->add_option("--threshold", threshold);
  series_cmd->add_option("--checkpoints", checkpoints_text, "comma-separated x values")->required();

  auto* table1 = app.add_subcommand("table1", "D_c(2; x) grid for c = 0.9..0.2, x = 1e6, 1e7, 2e7");
  auto* figure1 = app.add_subcommand("figure1", "W(2; y/log y; x) / (x / log x) for x = 2..xmax");
  figure1->add_option("--xmax", xmax_text);

  auto* perfect = app.add_subcommand("perfect", "m <= x with sigma(m) = l m");
  perfect->add_option("--ell", ell);

  auto* wirsing = app.add_subcommand("wirsing", "counting function of l-perfect numbers vs Wirsing's bound");
  wirsing->add_option("--ell", ell);
  wirsing->add_option("--checkpoints", checkpoints_text)->required();

  auto* dioph = app.add_subcommand("dioph", "solutions of b sigma(n) = a n + k");
  dioph->add_option("--a", a)->required();
  dioph->add_option("--b", b);
  dioph->add_option("--k", k)->required();
  dioph->add_option("--checkpoints", checkpoints_text);

  auto* census_cmd = app.add_subcommand("census", "solutions of b sigma(n) = k (mod n), classified");
  census_cmd->add_option("--b", b);
  census_cmd->add_option("--k", k)->required();

  auto* sporadic = app.add_subcommand("sporadic", "sporadic solution counts against b^2 x^(2/3)");
  sporadic->add_option("--b", b);
  sporadic->add_option("--k", k)->required();
  sporadic->add_option("--checkpoints", checkpoints_text)->required();

  auto* cdf = app.add_subcommand("cdf", "empirical distribution of sigma(n)/n");
  cdf->add_option("--grid", grid_text, "ascending comma-separated u values");

  auto* phase = app.add_subcommand("phase", "density of W under sublinear/linear/superlinear k");
  phase->add_option("--ell", ell);
  phase->add_option("--regime", regime_text)->check(CLI::IsMember({"sublinear", "linear", "superlinear"}));
  phase->add_option("--c", c_text);
  phase->add_option("--checkpoints", checkpoints_text)->required();

  auto* probe = app.add_subcommand("probe", "closest abundancy ratios to a real target");
  probe->add_option("--target", target_text);
  probe->add_option("--depth", depth);
  probe->add_option("--search-limit", search_text);

  auto* gcdsum = app.add_subcommand("gcdsum", "sum of gcd(m, sigma(m)) / m^2 over x^(1/3) < m <= x^(2/3)");
  gcdsum->add_option("--x", x_text);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (!limit_text.empty()) cfg.limit = parse_count(limit_text);
    if (!cache_dir_text.empty()) cfg.cache_dir = cache_dir_text;
    cfg.convention = CountingConvention{strict, threshold_at == "n", include_one};
    auto pick_format = [&](OutputFormat fallback) {
      if (format_text == "csv") return OutputFormat::csv;
      if (format_text == "json") return OutputFormat::json;
      if (format_text == "ndjson") return OutputFormat::ndjson;
      if (format_text == "table") return OutputFormat::table;
      return fallback;
    };
    cfg.format = pick_format(OutputFormat::csv);
    cfg.validate();
    const SigmaSource source = cfg.source();

    if (*sieve) {
      if (!verify_path.empty()) {
        SigmaSegment loaded = read_cache(verify_path);
        SigmaSegment fresh = sieve_segment(loaded.lo, loaded.hi, std::max(kDefaultSegmentBudget, loaded.hi - loaded.lo + 1));
        if (loaded.sigma != fresh.sigma) fail(ErrorKind::checksum, "cache contents disagree with a fresh sieve");
        out << "ok " << loaded.lo << ' ' << loaded.hi << '\n';
        return 0;
      }
      u64 lo = parse_count(lo_text);
      u64 hi = hi_text.empty() ? detail::require_limit(cfg, lo) : parse_count(hi_text);
      if (!out_path.empty()) {
        write_cache(source.segment(lo, hi), out_path);
        out << "wrote " << out_path << '\n';
        return 0;
      }
      out << "n,sigma,spf\n";
      source.for_each(lo, hi, [&](u64 n, u64 s, const SigmaSegment& seg) {
        out << n << ',' << s << ',' << seg.spf_at(n) << '\n';
      });
      return 0;
    }

    if (*count) {
      auto target = RationalTarget::parse(ell);
      auto spec = ThresholdSpec::parse(threshold);
      auto s = count_within(target, spec, detail::require_limit(cfg, 1'000'000), source, cfg.convention);
      io::write_series_csv(out, s.rows);
      return 0;
    }

    if (*series_cmd) {
      auto target = RationalTarget::parse(ell);
      auto spec = ThresholdSpec::parse(threshold);
      auto xs = parse_count_list(checkpoints_text);
      io::write_series_csv(out, series(target, spec, xs, source, cfg.convention).rows);
      return 0;
    }

    if (*table1) {
      auto report = table1_reproduce(source, detail::require_limit(cfg, kTable1X.back()));
      if (pick_format(OutputFormat::table) == OutputFormat::csv)
        io::write_table1_csv(out, report);
      else
        out << format_table1(report);
      return 0;
    }

    if (*figure1) {
      io::write_series_csv(out, figure1_series(source, parse_count(xmax_text), cfg.convention).rows);
      return 0;
    }

    if (*perfect) {
      auto census = enumerate_perfect(RationalTarget::parse(ell), detail::require_limit(cfg, 1'000'000), source);
      if (cfg.format == OutputFormat::json) {
        out << io::Json(census.members).dump() << '\n';
      } else {
        out << "m\n";
        for (u64 m : census.members) out << m << '\n';
      }
      return 0;
    }

    if (*wirsing) {
      auto report = wirsing_count_check(RationalTarget::parse(ell), parse_count_list(checkpoints_text), source);
      out << "x,count,ratio\n";
      for (const auto& r : report.rows) out << r.x << ',' << r.count << ',' << io::fixed(r.ratio) << '\n';
      if (report.violation) err << "warning: normalized count grew across checkpoints\n";
      return 0;
    }

    if (*dioph) {
      DiophantineProblem problem{a, b, k, detail::require_limit(cfg, 1'000'000)};
      std::vector<u64> xs;
      if (!checkpoints_text.empty()) xs = parse_count_list(checkpoints_text);
      auto result = solve_diophantine(problem, source, xs);
      switch (pick_format(OutputFormat::json)) {
        case OutputFormat::csv: {
          out << "x,count,quotient,predicted_density\n";
          for (const auto& r : result.series)
            out << r.x << ',' << r.count << ',' << io::fixed(r.quotient) << ',' << io::fixed(r.predicted_density)
                << '\n';
          break;
        }
        case OutputFormat::ndjson:
          for (const auto& r : result.solutions) io::write_solution_ndjson(out, r);
          break;
        default: io::write_solutions_json(out, result.solutions); break;
      }
      return 0;
    }

    if (*census_cmd) {
      CongruenceProblem problem{b, k, detail::require_limit(cfg, 1'000'000)};
      if (!problem.in_uniformity_range()) err << "warning: |k| >= b x^(2/3), outside the uniformity range\n";
      const OutputFormat fmt = pick_format(OutputFormat::ndjson);
      if (fmt == OutputFormat::ndjson) {
        census_stream(problem, source, [&](const SolutionRecord& r) { io::write_solution_ndjson(out, r); });
      } else {
        detail::emit_records(out, fmt, census(problem, source));
      }
      return 0;
    }

    if (*sporadic) {
      auto report = sporadic_growth_report(b, k, parse_count_list(checkpoints_text), source);
      out << "x,solutions,sporadic,ratio,slack_ratio\n";
      for (const auto& r : report.rows)
        out << r.x << ',' << r.solutions << ',' << r.sporadic << ',' << io::fixed(r.ratio) << ','
            << io::fixed(r.slack_ratio) << '\n';
      if (!report.bounded) err << "warning: sporadic ratio not bounded across checkpoints\n";
      return 0;
    }

    if (*cdf) {
      auto grid = parse_fraction_list(grid_text);
      io::write_cdf_csv(out, empirical_cdf(detail::require_limit(cfg, 1'000'000), grid, source));
      return 0;
    }

    if (*phase) {
      PhaseRegime regime;
      regime.kind = regime_text == "linear" ? Regime::linear
                    : regime_text == "superlinear" ? Regime::superlinear
                                                   : Regime::sublinear;
      regime.c = parse_fraction(c_text);
      auto report = phase_experiment(RationalTarget::parse(ell), regime, parse_count_list(checkpoints_text), source);
      io::write_phase_csv(out, report);
      if (!report.expectation_met) err << "note: regime expectation not met over these checkpoints\n";
      return 0;
    }

    if (*probe) {
      auto report = sigma_approx_probe(Real::parse(target_text), depth, parse_count(search_text), source);
      out << "level,search_limit,m,ratio,distance,within_inverse_log\n";
      for (const auto& h : report.hits)
        out << h.level << ',' << h.search_limit << ',' << h.m << ',' << h.ratio.to_string() << ','
            << h.distance.to_scientific(12) << ',' << (h.within_inverse_log ? "true" : "false") << '\n';
      if (report.exhausted) err << "note: no improvement at the final search level\n";
      return 0;
    }

    if (*gcdsum) {
      auto report = gcd_sum(parse_count(x_text), source);
      out << "x,m_min,m_max,value,scaled,ratio_to_bound\n";
      out << report.x << ',' << report.m_min << ',' << report.m_max << ',' << to_fixed(report.value, 20) << ','
          << io::fixed(report.scaled) << ',' << io::fixed(report.ratio_to_bound) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace wpn::cli
