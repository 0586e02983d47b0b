#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hpconc/bounds.hpp"
#include "hpconc/core.hpp"
#include "hpconc/examples.hpp"
#include "hpconc/extension.hpp"
#include "hpconc/oracle.hpp"

namespace hpconc::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& field, const std::string& what) {
  throw error(errc::parse_error, "field '" + field + "': " + what);
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

inline std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

inline std::vector<double> as_reals(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_real(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Params as_params(const json& v, const std::string& path) {
  Params out;
  if (v.is_null()) return out;
  if (!v.is_object()) fail(path, "expected an object of numbers");
  for (const auto& [key, val] : v.items()) {
    if (val.is_boolean()) {
      out[key] = val.get<bool>() ? 1.0 : 0.0;
    } else {
      out[key] = as_real(val, path + "." + key);
    }
  }
  return out;
}

inline Point as_point(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of symbol indices");
  Point x;
  for (std::size_t i = 0; i < v.size(); ++i) {
    x.coords.push_back(static_cast<symbol_t>(as_count(v[i], path + "[" + std::to_string(i) + "]")));
  }
  return x;
}

}  // namespace detail

inline json to_json(const Point& x) { return json(x.coords); }

inline json to_json(const TabulatedFunction& f) {
  if (const auto* v = f.values()) return json{{"type", "table"}, {"values", *v}};
  const auto* r = f.rule();
  return json{{"type", "builtin"}, {"name", r->name}, {"params", json(r->params)}};
}

inline json to_json(const SubsetY& y) {
  switch (y.kind()) {
    case SubsetY::Kind::exclude:
    case SubsetY::Kind::include: {
      json pts = json::array();
      for (const auto& x : y.points()) pts.push_back(to_json(x));
      return json{{"type", y.kind() == SubsetY::Kind::exclude ? "exclude" : "include"}, {"points", pts}};
    }
    case SubsetY::Kind::builtin:
      return json{{"type", "builtin"}, {"name", y.name()}, {"params", json(y.params())}};
  }
  return {};
}

/// Instance file layout: n, alphabet_sizes, probs, c, f, Y and optional sup_bound.
inline json to_json(const InstanceBundle& b) {
  json j;
  j["n"] = b.space.dimension();
  j["alphabet_sizes"] = std::vector<std::size_t>(b.space.alphabet_sizes().begin(), b.space.alphabet_sizes().end());
  j["probs"] = b.space.probs();
  j["c"] = std::vector<double>(b.metric.weights().begin(), b.metric.weights().end());
  j["f"] = to_json(b.f);
  j["Y"] = to_json(b.y);
  if (b.f.sup_bound()) j["sup_bound"] = *b.f.sup_bound();
  return j;
}

inline TabulatedFunction function_from_json(const json& j, std::optional<double> sup_bound) {
  const auto type = detail::field(j, "type", "f");
  if (type == "table") {
    return TabulatedFunction::table(detail::as_reals(detail::field(j, "values", "f"), "f.values"), sup_bound);
  }
  if (type == "builtin") {
    const auto& name = detail::field(j, "name", "f");
    if (!name.is_string()) detail::fail("f.name", "expected a string");
    const Params params = j.contains("params") ? detail::as_params(j["params"], "f.params") : Params{};
    try {
      return TabulatedFunction::builtin(name.get<std::string>(), params, sup_bound);
    } catch (const error& e) {
      detail::fail("f.name", e.what());
    }
  }
  detail::fail("f.type", "expected \"table\" or \"builtin\"");
}

inline SubsetY subset_from_json(const json& j) {
  const auto type = detail::field(j, "type", "Y");
  if (type == "exclude" || type == "include") {
    const auto& pts = detail::field(j, "points", "Y");
    if (!pts.is_array()) detail::fail("Y.points", "expected an array of points");
    std::vector<Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      points.push_back(detail::as_point(pts[i], "Y.points[" + std::to_string(i) + "]"));
    }
    return type == "exclude" ? SubsetY::exclude(std::move(points)) : SubsetY::include(std::move(points));
  }
  if (type == "builtin") {
    const auto& name = detail::field(j, "name", "Y");
    if (!name.is_string()) detail::fail("Y.name", "expected a string");
    const Params params = j.contains("params") ? detail::as_params(j["params"], "Y.params") : Params{};
    try {
      return SubsetY::builtin(name.get<std::string>(), params);
    } catch (const error& e) {
      detail::fail("Y.name", e.what());
    }
  }
  detail::fail("Y.type", "expected \"exclude\", \"include\" or \"builtin\"");
}

inline InstanceBundle instance_from_json(const json& j) {
  if (!j.is_object()) detail::fail("", "instance must be a JSON object");
  const std::size_t n = detail::as_count(detail::field(j, "n", ""), "n");

  const auto& sizes_j = detail::field(j, "alphabet_sizes", "");
  if (!sizes_j.is_array() || sizes_j.size() != n) detail::fail("alphabet_sizes", "expected n entries");
  const auto& probs_j = detail::field(j, "probs", "");
  if (!probs_j.is_array() || probs_j.size() != n) detail::fail("probs", "expected n probability vectors");
  std::vector<std::vector<double>> probs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    const std::size_t k = detail::as_count(sizes_j[i], "alphabet_sizes" + at);
    auto pi = detail::as_reals(probs_j[i], "probs" + at);
    if (k == 0) detail::fail("alphabet_sizes" + at, "must be positive");
    if (pi.size() != k) detail::fail("probs" + at, "length differs from alphabet_sizes" + at);
    probs.push_back(std::move(pi));
  }

  const auto c = detail::as_reals(detail::field(j, "c", ""), "c");
  if (c.size() != n) detail::fail("c", "expected n weights");

  std::optional<double> sup;
  if (j.contains("sup_bound") && !j["sup_bound"].is_null()) sup = detail::as_real(j["sup_bound"], "sup_bound");

  InstanceBundle b;
  try {
    b.space = ProductSpace(std::move(probs));
  } catch (const error& e) {
    detail::fail("probs", e.what());
  }
  try {
    b.metric = WeightedMetric(c);
  } catch (const error& e) {
    detail::fail("c", e.what());
  }
  b.f = function_from_json(detail::field(j, "f", ""), sup);
  try {
    b.f.check_compatible(b.space);
  } catch (const error& e) {
    detail::fail("f", e.what());
  }
  b.y = subset_from_json(detail::field(j, "Y", ""));
  try {
    b.y.check_compatible(b.space);
  } catch (const error& e) {
    detail::fail("Y.points", e.what());
  }
  b.label = "file";
  return b;
}

/// Canonical text form: sorted keys, two-space indent, shortest round-trip reals.
inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline InstanceBundle read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open instance file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw error(errc::parse_error, "instance file '" + path + "' is not valid JSON: " + e.what());
  }
  return instance_from_json(j);
}

inline json to_json(const ExtensionTable& t) { return json{{"type", "table"}, {"values", t.values}}; }

inline json to_json(const ViolationWitness& w) {
  return json{{"x", to_json(w.x)}, {"y", to_json(w.y)}, {"delta_f", w.delta_f}, {"distance", w.distance}};
}

inline json to_json(const Certification& c) {
  json j{{"ok", c.ok()}};
  if (c.violation) j["witness"] = to_json(*c.violation);
  return j;
}

inline json to_json(const BoundReport& r) {
  return json{{"epsilon", r.epsilon}, {"p", r.p},       {"c_bar", r.c_bar},
              {"sum_c_sq", r.sum_c_sq}, {"exp_term", r.exp_term}, {"raw", r.raw},
              {"total", r.total},     {"formula", to_string(r.formula)}};
}

inline json to_json(const ExactReport& r) {
  json j{{"p", r.p}, {"mu", r.mu}, {"m", r.m}, {"c_bar", r.c_bar}, {"y_count", r.y_count}};
  j["M"] = r.M ? json(*r.M) : json(nullptr);
  return j;
}

inline json to_json(const TailPoint& t) {
  return json{{"epsilon", t.epsilon},   {"exact_tail", t.exact_tail}, {"p", t.p},
              {"exp_term", t.exp_term}, {"bound_total", t.bound_total}, {"dominated", t.dominated}};
}

inline json to_json(const DominanceResult& d) {
  json pts = json::array();
  for (const auto& t : d.points) pts.push_back(to_json(t));
  return json{{"stats", to_json(d.stats)},
              {"center", d.center},
              {"side", d.side == TailSide::upper ? "upper" : "two_sided"},
              {"all_dominated", d.all_dominated()},
              {"points", pts}};
}

inline json to_json(const MCReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json se = json::array();
  for (const auto& s : r.tail_se) se.push_back(opt(s));
  return json{{"seed", r.seed},         {"samples", r.samples}, {"in_y", r.in_y},
              {"center", r.center},     {"p_hat", r.p_hat},     {"p_se", opt(r.p_se)},
              {"m_hat", opt(r.m_hat)},  {"m_se", opt(r.m_se)},  {"epsilons", r.epsilons},
              {"tail_hat", r.tail_hat}, {"tail_se", se}};
}

/// Real number with 17 significant digits.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Columns: epsilon, exact_tail, p, exp_term, bound_total, dominated.
inline std::string dominance_csv(const DominanceResult& d) {
  std::ostringstream out;
  out << "epsilon,exact_tail,p,exp_term,bound_total,dominated\n";
  for (const auto& t : d.points) {
    out << format_real(t.epsilon) << ',' << format_real(t.exact_tail) << ',' << format_real(t.p) << ','
        << format_real(t.exp_term) << ',' << format_real(t.bound_total) << ',' << (t.dominated ? "true" : "false")
        << '\n';
  }
  return out.str();
}

/// Columns: rank, x_0 .. x_{n-1}, value.
inline std::string extension_csv(const ProductSpace& space, const ExtensionTable& t) {
  std::ostringstream out;
  out << "rank";
  for (std::size_t i = 0; i < space.dimension(); ++i) out << ",x_" << i;
  out << ",value\n";
  for_each_point(space, t.values.size(), [&](rank_t r, const Point& x) {
    out << r;
    for (symbol_t s : x.coords) out << ',' << s;
    out << ',' << format_real(t.values[r]) << '\n';
  });
  return out.str();
}

}  // namespace hpconc::io
