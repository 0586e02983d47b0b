#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hpconc/bounds.hpp"
#include "hpconc/core.hpp"
#include "hpconc/examples.hpp"
#include "hpconc/extension.hpp"
#include "hpconc/io.hpp"
#include "hpconc/oracle.hpp"

namespace hpconc::cli {

enum class Command { certify, extend, stats, bound, validate, mc, example };
enum class Format { json, csv };

inline constexpr std::size_t kMaxGridPoints = 1'000'000;

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

inline std::optional<double> parse_real(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// "start:stop:step" -> start, start + step, ... up to the last point that
/// lies strictly less than half a step beyond stop. Points are rounded to 15
/// significant digits so that e.g. 0:1:0.02 yields 0.06 rather than 0.060000000000000005.
inline std::vector<double> parse_eps_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = spec.find(':', pos);
    parts.push_back(spec.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  const std::string quoted = "'" + std::string(spec) + "'";
  if (parts.size() != 3) throw error(errc::parse_error, "epsilon grid " + quoted + " is not start:stop:step");
  const auto start = parse_real(parts[0]);
  const auto stop = parse_real(parts[1]);
  const auto step = parse_real(parts[2]);
  if (!start || !stop || !step) throw error(errc::parse_error, "epsilon grid " + quoted + " has a malformed number");
  if (!(*step > 0.0)) throw error(errc::parse_error, "epsilon grid " + quoted + " needs step > 0");
  if (*stop < *start) throw error(errc::parse_error, "epsilon grid " + quoted + " needs start <= stop");

  const double last = std::ceil((*stop - *start) / *step + 0.5) - 1.0;
  if (!(last < static_cast<double>(kMaxGridPoints))) {
    throw error(errc::parse_error, "epsilon grid " + quoted + " has too many points");
  }
  std::vector<double> grid;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(last); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", *start + static_cast<double>(k) * *step);
    grid.push_back(std::strtod(buf, nullptr));
  }
  return grid;
}

inline std::vector<double> parse_real_list(std::string_view text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const auto v = parse_real(item);
    if (!v) throw error(errc::parse_error, what + ": '" + std::string(item) + "' is not a number");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct RunConfig {
  Command command = Command::stats;

  // Instance source: a file or a builtin example, never both.
  std::optional<std::string> instance_path;
  std::optional<std::string> example;  // counterexample1 | toy | random
  std::size_t n = 3;
  double b = 1.0;
  bool centered = false;

  std::optional<double> eps;
  std::optional<std::string> eps_grid;
  std::optional<double> p;
  std::optional<std::string> c;  // comma-separated weights
  bool two_sided = false;
  bool mcdiarmid = false;
  std::optional<double> center;

  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;

  std::optional<std::string> output;
  std::optional<Format> format;

  bool verify = false;
  bool with_extension = false;
  bool paper_toy_bound = false;
  std::optional<std::uint64_t> cap;
  unsigned threads = 0;
  std::vector<std::string> chain;  // example: commands to run on the built instance
};

/// Enumeration cap: --cap, else HPCONC_CAP, else the library default.
inline ScanLimits resolve_limits(const RunConfig& cfg) {
  ScanLimits limits;
  if (cfg.cap) {
    limits.enumeration_cap = *cfg.cap;
  } else if (const char* env = std::getenv("HPCONC_CAP")) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw error(errc::parse_error, "HPCONC_CAP='" + std::string(s) + "' is not an unsigned integer");
    }
    limits.enumeration_cap = v;
  }
  return limits;
}

inline InstanceBundle build_example(const std::string& name, std::size_t n, double b, bool centered,
                                    std::uint64_t seed) {
  if (name == "counterexample1") return examples::counterexample1(n);
  if (name == "toy") return examples::toy_example(n, b, centered);
  if (name == "random") return examples::random_certified_instance(seed);
  throw error(errc::invalid_argument, "unknown example '" + name + "' (counterexample1, toy, random)");
}

inline InstanceBundle load_instance(const RunConfig& cfg) {
  if (cfg.instance_path && cfg.example) {
    throw error(errc::invalid_argument, "give either --instance or --example, not both");
  }
  if (cfg.instance_path) return io::read_instance(*cfg.instance_path);
  if (cfg.example) return build_example(*cfg.example, cfg.n, cfg.b, cfg.centered, cfg.seed);
  throw error(errc::invalid_argument, "an instance is required (--instance FILE or --example NAME)");
}

struct Outcome {
  std::string text;
  int status = kExitOk;
};

namespace detail {

inline std::vector<double> grid_or(const RunConfig& cfg, const char* fallback) {
  if (cfg.eps_grid && cfg.eps) throw error(errc::invalid_argument, "give either --eps or --eps-grid, not both");
  if (cfg.eps) return {*cfg.eps};
  return parse_eps_grid(cfg.eps_grid ? *cfg.eps_grid : fallback);
}

inline OracleOptions oracle_options(const RunConfig& cfg) { return {resolve_limits(cfg), Parallelism{cfg.threads}}; }

inline std::size_t toy_dimension(const InstanceBundle& b) {
  auto it = b.params.find("n");
  if (b.label.rfind("toy", 0) != 0 || it == b.params.end()) {
    throw error(errc::invalid_argument, "--paper-toy-bound applies to the toy example only");
  }
  return static_cast<std::size_t>(it->second);
}

inline Outcome certify(const RunConfig& cfg, const InstanceBundle& b) {
  const auto cert = check_bounded_differences(b.f, b.y, b.metric, b.space, resolve_limits(cfg));
  return {io::canonical(io::to_json(cert)), kExitOk};
}

inline Outcome extend_cmd(const RunConfig& cfg, const InstanceBundle& b, Format fmt) {
  const auto table = extend(b.f, b.y, b.metric, b.space,
                            ExtendOptions{cfg.verify, resolve_limits(cfg), Parallelism{cfg.threads}});
  if (fmt == Format::csv) return {io::extension_csv(b.space, table), kExitOk};
  return {io::canonical(io::to_json(table)), kExitOk};
}

inline Outcome stats(const RunConfig& cfg, const InstanceBundle& b) {
  const auto rep = exact_stats(b.space, b.f, b.y, b.metric, cfg.with_extension, oracle_options(cfg));
  return {io::canonical(io::to_json(rep)), kExitOk};
}

inline Outcome bound(const RunConfig& cfg, const std::optional<InstanceBundle>& b, Format fmt) {
  std::optional<WeightedMetric> metric;
  if (cfg.c) metric = WeightedMetric(parse_real_list(*cfg.c, "--c"));
  else if (b) metric = b->metric;
  else throw error(errc::invalid_argument, "bound needs --c or an instance");

  double p = 0.0;
  if (cfg.p) p = *cfg.p;
  else if (b && !cfg.mcdiarmid) p = exact_stats(b->space, b->f, b->y, b->metric, false, oracle_options(cfg)).p;
  else if (!cfg.mcdiarmid) throw error(errc::invalid_argument, "bound needs --p or an instance");

  std::vector<BoundReport> reports;
  for (double eps : grid_or(cfg, "0:1:0.1")) {
    if (cfg.mcdiarmid) reports.push_back(mcdiarmid_bound(eps, *metric));
    else if (cfg.two_sided) reports.push_back(hp_bound_two_sided(eps, p, *metric));
    else reports.push_back(hp_bound(eps, p, *metric));
  }
  if (fmt == Format::csv) {
    std::ostringstream out;
    out << "epsilon,p,c_bar,sum_c_sq,exp_term,raw,total\n";
    for (const auto& r : reports) {
      out << io::format_real(r.epsilon) << ',' << io::format_real(r.p) << ',' << io::format_real(r.c_bar) << ','
          << io::format_real(r.sum_c_sq) << ',' << io::format_real(r.exp_term) << ',' << io::format_real(r.raw)
          << ',' << io::format_real(r.total) << '\n';
    }
    return {out.str(), kExitOk};
  }
  if (cfg.eps) return {io::canonical(io::to_json(reports.front())), kExitOk};
  io::json arr = io::json::array();
  for (const auto& r : reports) arr.push_back(io::to_json(r));
  return {io::canonical(arr), kExitOk};
}

inline Outcome validate(const RunConfig& cfg, const InstanceBundle& b, Format fmt) {
  const auto options = oracle_options(cfg);
  if (cfg.verify) {
    const auto cert = check_bounded_differences(b.f, b.y, b.metric, b.space, options.limits);
    if (!cert) throw error(errc::not_certified, "f does not have c-bounded differences on Y");
  }
  const auto grid = grid_or(cfg, "0:1:0.02");
  const auto res = dominance_check(b.space, b.f, b.y, b.metric, grid, cfg.center,
                                   cfg.two_sided ? TailSide::two_sided : TailSide::upper, options);
  const int status = res.all_dominated() ? kExitOk : kExitViolation;

  std::optional<std::size_t> toy_n;
  if (cfg.paper_toy_bound) toy_n = toy_dimension(b);

  if (fmt == Format::csv) {
    std::string text = io::dominance_csv(res);
    if (!toy_n) return {std::move(text), status};
    // Append the quoted closed form as an extra column.
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    std::getline(in, line);
    out << line << ",quoted_toy_bound\n";
    for (const auto& t : res.points) {
      std::getline(in, line);
      out << line << ',' << io::format_real(toy_quoted_bound(*toy_n, t.epsilon)) << '\n';
    }
    return {out.str(), status};
  }
  auto j = io::to_json(res);
  if (toy_n) {
    for (std::size_t i = 0; i < res.points.size(); ++i) {
      j["points"][i]["quoted_toy_bound"] = toy_quoted_bound(*toy_n, res.points[i].epsilon);
    }
  }
  return {io::canonical(j), status};
}

inline Outcome mc(const RunConfig& cfg, const InstanceBundle& b) {
  const auto options = oracle_options(cfg);
  double center = 0.0;
  if (cfg.center) {
    center = *cfg.center;
  } else {
    const auto count = b.space.point_count();
    if (!count || *count > options.limits.enumeration_cap) {
      throw error(errc::space_too_large, "space too large to compute m exactly; pass --center");
    }
    center = exact_stats(b.space, b.f, b.y, b.metric, false, options).m;
  }
  const auto grid = grid_or(cfg, "0:1:0.1");
  const auto rep = mc_estimate(b.space, b.f, b.y, center, grid, cfg.seed, cfg.samples,
                               cfg.two_sided ? TailSide::two_sided : TailSide::upper, options);
  return {io::canonical(io::to_json(rep)), kExitOk};
}

inline Command parse_command(const std::string& name) {
  if (name == "certify") return Command::certify;
  if (name == "extend") return Command::extend;
  if (name == "stats") return Command::stats;
  if (name == "bound") return Command::bound;
  if (name == "validate") return Command::validate;
  if (name == "mc") return Command::mc;
  throw error(errc::invalid_argument, "cannot chain '" + name + "'");
}

inline Outcome dispatch(Command cmd, const RunConfig& cfg, const std::optional<InstanceBundle>& b, Format fmt) {
  switch (cmd) {
    case Command::certify: return certify(cfg, *b);
    case Command::extend: return extend_cmd(cfg, *b, fmt);
    case Command::stats: return stats(cfg, *b);
    case Command::bound: return bound(cfg, b, fmt);
    case Command::validate: return validate(cfg, *b, fmt);
    case Command::mc: return mc(cfg, *b);
    case Command::example: break;
  }
  throw error(errc::invalid_argument, "example cannot be nested");
}

inline Outcome example(const RunConfig& cfg) {
  if (!cfg.example) throw error(errc::invalid_argument, "example needs --example NAME");
  const auto b = load_instance(cfg);
  if (cfg.chain.empty()) return {io::canonical(io::to_json(b)), kExitOk};
  io::json out;
  out["instance"] = io::to_json(b);
  int status = kExitOk;
  for (const auto& name : cfg.chain) {
    const auto res = dispatch(parse_command(name), cfg, b, Format::json);
    out[name] = io::json::parse(res.text);
    status = std::max(status, res.status);
  }
  return {io::canonical(out), status};
}

}  // namespace detail

/// Executes one command and returns its report text and exit status. Errors
/// propagate as hpconc::error.
inline Outcome execute(const RunConfig& cfg) {
  const Format fmt = cfg.format.value_or(cfg.command == Command::validate ? Format::csv : Format::json);
  if (cfg.command == Command::example) return detail::example(cfg);
  std::optional<InstanceBundle> b;
  if (cfg.command != Command::bound || cfg.instance_path || cfg.example) b = load_instance(cfg);
  return detail::dispatch(cfg.command, cfg, b, fmt);
}

/// execute() plus output handling: writes the report to --output or `out`,
/// and maps errors to exit status 1 with a message on `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto res = execute(cfg);
    if (cfg.output) {
      std::ofstream file(*cfg.output);
      if (!file) throw error(errc::invalid_argument, "cannot write '" + *cfg.output + "'");
      file << res.text;
    } else {
      out << res.text;
    }
    return res.status;
  } catch (const error& e) {
    err << "error: " << e.what();
    if (e.code() == errc::space_too_large) err << " (use --cap or HPCONC_CAP)";
    err << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace hpconc::cli
