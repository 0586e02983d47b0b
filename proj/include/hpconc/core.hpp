#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hpconc/error.hpp"
#include "hpconc/summation.hpp"

namespace hpconc {

using symbol_t = std::uint32_t;
using rank_t = std::uint64_t;

inline constexpr rank_t kDefaultEnumerationCap = rank_t{1} << 26;
inline constexpr std::uint64_t kDefaultPairScanCap = std::uint64_t{1} << 32;

/// Slack used by every inequality check in the library.
inline constexpr double kTolerance = 1e-9;

struct ScanLimits {
  rank_t enumeration_cap = kDefaultEnumerationCap;
  /// Bound on |Y|^2 for pairwise certification scans.
  std::uint64_t pair_cap = kDefaultPairScanCap;
};

/// A point of the product space: one symbol index per coordinate.
/// Lexicographic order on coordinates coincides with mixed-radix rank order.
struct Point {
  std::vector<symbol_t> coords;

  Point() = default;
  explicit Point(std::vector<symbol_t> c) : coords(std::move(c)) {}
  Point(std::initializer_list<symbol_t> c) : coords(c) {}

  std::size_t size() const noexcept { return coords.size(); }
  symbol_t operator[](std::size_t i) const { return coords[i]; }
  symbol_t& operator[](std::size_t i) { return coords[i]; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) { return a.coords <=> b.coords; }
};

/// Finite product of alphabets with an independent law on each coordinate.
class ProductSpace {
 public:
  ProductSpace() = default;

  explicit ProductSpace(std::vector<std::vector<double>> probs) : probs_(std::move(probs)) {
    sizes_.reserve(probs_.size());
    strides_.assign(probs_.size(), 0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const auto& pi = probs_[i];
      if (pi.empty()) {
        throw error(errc::invalid_argument,
                    "coordinate " + std::to_string(i) + " has an empty alphabet");
      }
      double total = 0.0;
      for (double q : pi) {
        if (!std::isfinite(q) || q < 0.0) {
          throw error(errc::invalid_argument,
                      "coordinate " + std::to_string(i) + " has a negative or non-finite probability");
        }
        total += q;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw error(errc::invalid_argument,
                    "coordinate " + std::to_string(i) + " probabilities do not sum to 1");
      }
      sizes_.push_back(pi.size());
    }
    // Big-endian strides, saturating; only meaningful when the total fits.
    rank_t stride = 1;
    bool overflow = false;
    for (std::size_t i = probs_.size(); i-- > 0;) {
      strides_[i] = stride;
      if (!overflow && stride > std::numeric_limits<rank_t>::max() / sizes_[i]) {
        overflow = true;
      }
      if (!overflow) stride *= sizes_[i];
    }
    count_ = overflow ? std::nullopt : std::optional<rank_t>(stride);
  }

  static ProductSpace uniform(std::span<const std::size_t> sizes) {
    std::vector<std::vector<double>> probs;
    probs.reserve(sizes.size());
    for (std::size_t k : sizes) {
      if (k == 0) throw error(errc::invalid_argument, "alphabet size must be positive");
      probs.emplace_back(k, 1.0 / static_cast<double>(k));
    }
    return ProductSpace(std::move(probs));
  }

  static ProductSpace uniform(std::initializer_list<std::size_t> sizes) {
    std::vector<std::size_t> v(sizes);
    return uniform(std::span<const std::size_t>(v));
  }

  /// {0,1}^n with fair coordinates.
  static ProductSpace hypercube(std::size_t n) {
    return uniform(std::vector<std::size_t>(n, 2));
  }

  std::size_t dimension() const noexcept { return sizes_.size(); }
  std::size_t alphabet_size(std::size_t i) const { return sizes_.at(i); }
  std::span<const std::size_t> alphabet_sizes() const noexcept { return sizes_; }
  const std::vector<std::vector<double>>& probs() const noexcept { return probs_; }
  double prob(std::size_t i, symbol_t s) const { return probs_[i][s]; }
  rank_t stride(std::size_t i) const { return strides_.at(i); }

  /// Number of points, or nullopt when it does not fit in 64 bits.
  std::optional<rank_t> point_count() const noexcept { return count_; }

  rank_t checked_point_count(rank_t cap) const {
    if (!count_ || *count_ > cap) {
      throw error(errc::space_too_large,
                  "space has more than " + std::to_string(cap) +
                      " points; raise the enumeration cap to proceed");
    }
    return *count_;
  }

  bool contains(const Point& x) const noexcept {
    if (x.size() != dimension()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= sizes_[i]) return false;
    }
    return true;
  }

  void validate(const Point& x) const {
    if (x.size() != dimension()) {
      throw error(errc::arity_mismatch, "point has " + std::to_string(x.size()) +
                                            " coordinates, space has " +
                                            std::to_string(dimension()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= sizes_[i]) {
        throw error(errc::invalid_argument, "coordinate " + std::to_string(i) + " index " +
                                                std::to_string(x[i]) + " out of range");
      }
    }
  }

  rank_t rank(const Point& x) const {
    validate(x);
    if (!count_) throw error(errc::space_too_large, "space is too large to rank points");
    rank_t r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r += x[i] * strides_[i];
    return r;
  }

  Point unrank(rank_t r) const {
    if (!count_ || r >= *count_) throw error(errc::invalid_argument, "rank out of range");
    Point x;
    x.coords.resize(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) {
      x[i] = static_cast<symbol_t>(r / strides_[i]);
      r %= strides_[i];
    }
    return x;
  }

 private:
  std::vector<std::vector<double>> probs_;
  std::vector<std::size_t> sizes_;
  std::vector<rank_t> strides_;
  std::optional<rank_t> count_ = rank_t{1};
};

/// Visits every point in ascending rank order as fn(rank, point).
template <class Fn>
void for_each_point(const ProductSpace& space, rank_t cap, Fn&& fn) {
  const rank_t total = space.checked_point_count(cap);
  const std::size_t n = space.dimension();
  Point x;
  x.coords.assign(n, 0);
  for (rank_t r = 0; r < total; ++r) {
    fn(r, std::as_const(x));
    for (std::size_t i = n; i-- > 0;) {
      if (++x[i] < space.alphabet_size(i)) break;
      x[i] = 0;
    }
  }
}

inline std::vector<Point> enumerate_points(const ProductSpace& space,
                                           rank_t cap = kDefaultEnumerationCap) {
  std::vector<Point> out;
  out.reserve(space.checked_point_count(cap));
  for_each_point(space, cap, [&](rank_t, const Point& x) { out.push_back(x); });
  return out;
}

inline double point_probability(const ProductSpace& space, const Point& x) {
  space.validate(x);
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= space.prob(i, x[i]);
  return p;
}

/// Probability of every point, in rank order.
inline std::vector<double> point_probabilities(const ProductSpace& space,
                                               rank_t cap = kDefaultEnumerationCap) {
  std::vector<double> out(space.checked_point_count(cap));
  for_each_point(space, cap, [&](rank_t r, const Point& x) {
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) p *= space.prob(i, x[i]);
    out[r] = p;
  });
  return out;
}

/// Weight vector c with d_c(x, y) = sum of c_i over coordinates where x and y differ.
class WeightedMetric {
 public:
  WeightedMetric() = default;

  explicit WeightedMetric(std::vector<double> c) : c_(std::move(c)) {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!std::isfinite(c_[i]) || c_[i] < 0.0) {
        throw error(errc::invalid_argument,
                    "weight c_" + std::to_string(i) + " must be finite and non-negative");
      }
      c_bar_ += c_[i];
      sum_sq_ += c_[i] * c_[i];
    }
  }

  static WeightedMetric zeros(std::size_t n) { return WeightedMetric(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return c_.size(); }
  std::span<const double> weights() const noexcept { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }
  double c_bar() const noexcept { return c_bar_; }
  double sum_sq() const noexcept { return sum_sq_; }

  double distance(std::span<const symbol_t> x, std::span<const symbol_t> y) const noexcept {
    double d = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (x[i] != y[i]) d += c_[i];
    }
    return d;
  }

  friend bool operator==(const WeightedMetric& a, const WeightedMetric& b) { return a.c_ == b.c_; }

 private:
  std::vector<double> c_;
  double c_bar_ = 0.0;
  double sum_sq_ = 0.0;
};

inline double weighted_hamming(const WeightedMetric& metric, const Point& x, const Point& y) {
  if (x.size() != metric.size() || y.size() != metric.size()) {
    throw error(errc::arity_mismatch, "points and weight vector differ in length");
  }
  return metric.distance(x.coords, y.coords);
}

using Params = std::map<std::string, double>;

/// Named closed-form rule for f.
struct BuiltinRule {
  std::string name;
  Params params;

  friend bool operator==(const BuiltinRule&, const BuiltinRule&) = default;
};

namespace detail {

inline double param_or(const Params& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

inline double require_param(const Params& params, const std::string& rule, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw error(errc::invalid_argument, "builtin '" + rule + "' requires parameter '" + key + "'");
  }
  return it->second;
}

inline bool all_zero(const Point& x) {
  return std::all_of(x.coords.begin(), x.coords.end(), [](symbol_t s) { return s == 0; });
}

inline bool all_max(const ProductSpace& space, const Point& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] + 1 != space.alphabet_size(i)) return false;
  }
  return true;
}

}  // namespace detail

/// The function f, held either as a dense table in rank order or as a builtin
/// rule, with an optional declared bound F on |f|.
///
/// Builtin rules:
///   constant {value}          f = value
///   coordinate {index, scale} f = scale * x_index
///   mean {scale}              f = scale * (1/n) sum x_i
///   origin_spike {height}     f = height at the all-zero point, 0 elsewhere
///   toy {B, centered}         f = B at the all-zero point, -B at the all-max point,
///                             (1/n) sum 2(x_i - 1) elsewhere; centered adds 1 everywhere
class TabulatedFunction {
 public:
  enum class Rule { constant, coordinate, mean, origin_spike, toy };

  TabulatedFunction() : TabulatedFunction(table({})) {}

  static TabulatedFunction table(std::vector<double> values,
                                 std::optional<double> sup_bound = std::nullopt) {
    for (double v : values) {
      if (!std::isfinite(v)) throw error(errc::invalid_argument, "function table has a non-finite value");
    }
    return TabulatedFunction(std::move(values), check_sup(sup_bound));
  }

  static TabulatedFunction builtin(std::string name, Params params = {},
                                   std::optional<double> sup_bound = std::nullopt) {
    return TabulatedFunction(BuiltinRule{std::move(name), std::move(params)}, check_sup(sup_bound));
  }

  bool is_table() const noexcept { return std::holds_alternative<std::vector<double>>(source_); }
  const std::vector<double>* values() const noexcept { return std::get_if<std::vector<double>>(&source_); }
  const BuiltinRule* rule() const noexcept { return std::get_if<BuiltinRule>(&source_); }
  std::optional<double> sup_bound() const noexcept { return sup_bound_; }

  /// Throws unless f is defined on every point of the space.
  void check_compatible(const ProductSpace& space) const {
    if (const auto* v = values()) {
      const auto count = space.point_count();
      if (!count || *count != v->size()) {
        throw error(errc::invalid_argument,
                    "function table has " + std::to_string(v->size()) +
                        " values but the space has " +
                        (count ? std::to_string(*count) : std::string("too many")) + " points");
      }
    } else if (kind_ == Rule::coordinate) {
      const double idx = detail::require_param(rule()->params, rule()->name, "index");
      if (idx < 0 || idx != std::floor(idx) || idx >= static_cast<double>(space.dimension())) {
        throw error(errc::invalid_argument, "builtin 'coordinate' index out of range");
      }
    }
  }

  /// f(x), given the rank of x (used only for tables).
  double evaluate(const ProductSpace& space, rank_t r, const Point& x) const {
    if (const auto* v = values()) return (*v)[r];
    const auto& p = rule()->params;
    switch (kind_) {
      case Rule::constant:
        return detail::require_param(p, "constant", "value");
      case Rule::coordinate: {
        const auto i = static_cast<std::size_t>(detail::require_param(p, "coordinate", "index"));
        return detail::param_or(p, "scale", 1.0) * static_cast<double>(x[i]);
      }
      case Rule::mean: {
        if (x.size() == 0) return 0.0;
        double s = 0.0;
        for (symbol_t c : x.coords) s += static_cast<double>(c);
        return detail::param_or(p, "scale", 1.0) * s / static_cast<double>(x.size());
      }
      case Rule::origin_spike:
        return detail::all_zero(x) ? detail::require_param(p, "origin_spike", "height") : 0.0;
      case Rule::toy: {
        const double shift = detail::param_or(p, "centered", 0.0) != 0.0 ? 1.0 : 0.0;
        const double b = detail::require_param(p, "toy", "B");
        if (detail::all_zero(x)) return b + shift;
        if (detail::all_max(space, x)) return -b + shift;
        double s = 0.0;
        for (symbol_t c : x.coords) s += 2.0 * (static_cast<double>(c) - 1.0);
        return s / static_cast<double>(x.size()) + shift;
      }
    }
    return 0.0;
  }

  double operator()(const ProductSpace& space, const Point& x) const {
    return evaluate(space, is_table() ? space.rank(x) : 0, x);
  }

  /// Dense table of f over the space in rank order.
  std::vector<double> tabulate(const ProductSpace& space, rank_t cap = kDefaultEnumerationCap) const {
    check_compatible(space);
    if (const auto* v = values()) {
      space.checked_point_count(cap);
      return *v;
    }
    std::vector<double> out(space.checked_point_count(cap));
    for_each_point(space, cap, [&](rank_t r, const Point& x) { out[r] = evaluate(space, r, x); });
    return out;
  }

  friend bool operator==(const TabulatedFunction& a, const TabulatedFunction& b) {
    return a.source_ == b.source_ && a.sup_bound_ == b.sup_bound_;
  }

 private:
  TabulatedFunction(std::variant<std::vector<double>, BuiltinRule> source, std::optional<double> sup)
      : source_(std::move(source)), sup_bound_(sup) {
    if (const auto* r = rule()) kind_ = parse_rule(r->name);
  }

  static std::optional<double> check_sup(std::optional<double> sup) {
    if (sup && (!std::isfinite(*sup) || *sup < 0.0)) {
      throw error(errc::invalid_argument, "sup_bound must be finite and non-negative");
    }
    return sup;
  }

  static Rule parse_rule(const std::string& name) {
    if (name == "constant") return Rule::constant;
    if (name == "coordinate") return Rule::coordinate;
    if (name == "mean") return Rule::mean;
    if (name == "origin_spike") return Rule::origin_spike;
    if (name == "toy") return Rule::toy;
    throw error(errc::invalid_argument, "unknown builtin function '" + name + "'");
  }

  std::variant<std::vector<double>, BuiltinRule> source_;
  std::optional<double> sup_bound_;
  Rule kind_ = Rule::constant;
};

/// The good set Y, given as an exclude list, an include list or a builtin
/// predicate ("all", "exclude_origin", "exclude_extremes"). Point lists are
/// kept sorted and deduplicated.
class SubsetY {
 public:
  enum class Kind { exclude, include, builtin };

  SubsetY() : SubsetY(all()) {}

  static SubsetY exclude(std::vector<Point> points) { return SubsetY(Kind::exclude, normalize(std::move(points)), {}); }
  static SubsetY include(std::vector<Point> points) { return SubsetY(Kind::include, normalize(std::move(points)), {}); }

  static SubsetY builtin(std::string name, Params params = {}) {
    if (name != "all" && name != "exclude_origin" && name != "exclude_extremes") {
      throw error(errc::invalid_argument, "unknown builtin subset '" + name + "'");
    }
    SubsetY y(Kind::builtin, {}, std::move(params));
    y.name_ = std::move(name);
    return y;
  }

  static SubsetY all() { return builtin("all"); }

  Kind kind() const noexcept { return kind_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::string& name() const noexcept { return name_; }
  const Params& params() const noexcept { return params_; }

  void check_compatible(const ProductSpace& space) const {
    for (const auto& x : points_) space.validate(x);
  }

  bool contains(const ProductSpace& space, const Point& x) const {
    switch (kind_) {
      case Kind::exclude:
        return !std::binary_search(points_.begin(), points_.end(), x);
      case Kind::include:
        return std::binary_search(points_.begin(), points_.end(), x);
      case Kind::builtin:
        if (name_ == "all") return true;
        if (name_ == "exclude_origin") return !detail::all_zero(x);
        return !detail::all_zero(x) && !detail::all_max(space, x);
    }
    return false;
  }

  /// Ranks of the members of Y, ascending.
  std::vector<rank_t> materialize(const ProductSpace& space, rank_t cap = kDefaultEnumerationCap) const {
    check_compatible(space);
    std::vector<rank_t> out;
    if (kind_ == Kind::include) {
      out.reserve(points_.size());
      for (const auto& x : points_) out.push_back(space.rank(x));
      return out;
    }
    for_each_point(space, cap, [&](rank_t r, const Point& x) {
      if (contains(space, x)) out.push_back(r);
    });
    return out;
  }

  friend bool operator==(const SubsetY& a, const SubsetY& b) {
    return a.kind_ == b.kind_ && a.points_ == b.points_ && a.name_ == b.name_ && a.params_ == b.params_;
  }

 private:
  SubsetY(Kind kind, std::vector<Point> points, Params params)
      : kind_(kind), points_(std::move(points)), params_(std::move(params)) {}

  static std::vector<Point> normalize(std::vector<Point> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
  }

  Kind kind_ = Kind::builtin;
  std::vector<Point> points_;
  std::string name_ = "all";
  Params params_;
};

/// Evidence that f does not have c-bounded differences on Y.
struct ViolationWitness {
  Point x;
  Point y;
  double delta_f = 0.0;
  double distance = 0.0;
};

struct Certification {
  std::optional<ViolationWitness> violation;

  bool ok() const noexcept { return !violation.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
};

namespace detail {

inline void check_arity(const WeightedMetric& metric, const ProductSpace& space) {
  if (metric.size() != space.dimension()) {
    throw error(errc::arity_mismatch, "weight vector has " + std::to_string(metric.size()) +
                                          " entries, space has " + std::to_string(space.dimension()) +
                                          " coordinates");
  }
}

/// Flat row-major coordinates of the given ranks.
inline std::vector<symbol_t> gather_coords(const ProductSpace& space, std::span<const rank_t> ranks) {
  const std::size_t n = space.dimension();
  std::vector<symbol_t> out(ranks.size() * n);
  for (std::size_t j = 0; j < ranks.size(); ++j) {
    rank_t r = ranks[j];
    for (std::size_t i = 0; i < n; ++i) {
      out[j * n + i] = static_cast<symbol_t>(r / space.stride(i));
      r %= space.stride(i);
    }
  }
  return out;
}

/// Lowest-rank pair (x, y), x < y, of Y violating |f(x)-f(y)| <= d_c(x,y) + tol.
inline std::optional<ViolationWitness> pairwise_scan(const ProductSpace& space, std::span<const rank_t> ys,
                                                     std::span<const double> fy, const WeightedMetric& metric) {
  const std::size_t n = space.dimension();
  const auto coords = gather_coords(space, ys);
  std::span<const symbol_t> all(coords);
  for (std::size_t a = 0; a < ys.size(); ++a) {
    const auto xa = all.subspan(a * n, n);
    for (std::size_t b = a + 1; b < ys.size(); ++b) {
      const double diff = std::abs(fy[a] - fy[b]);
      if (diff <= kTolerance) continue;
      const auto xb = all.subspan(b * n, n);
      const double d = metric.distance(xa, xb);
      if (diff > d + kTolerance) {
        return ViolationWitness{Point({xa.begin(), xa.end()}), Point({xb.begin(), xb.end()}), diff, d};
      }
    }
  }
  return std::nullopt;
}

/// Lowest-rank pair differing in exactly one coordinate i with |f(x)-f(y)| > c_i + tol.
inline std::optional<ViolationWitness> neighbor_scan(const ProductSpace& space, std::span<const double> values,
                                                     const WeightedMetric& metric, rank_t cap) {
  std::optional<ViolationWitness> found;
  rank_t best_x = 0, best_y = 0;
  for_each_point(space, cap, [&](rank_t r, const Point& x) {
    if (found && r > best_x) return;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (symbol_t s = x[i] + 1; s < space.alphabet_size(i); ++s) {
        const rank_t q = r + (s - x[i]) * space.stride(i);
        const double diff = std::abs(values[r] - values[q]);
        if (diff > metric[i] + kTolerance && (!found || q < best_y)) {
          Point y = x;
          y[i] = s;
          found = ViolationWitness{x, std::move(y), diff, metric[i]};
          best_x = r;
          best_y = q;
        }
      }
    }
  });
  return found;
}

}  // namespace detail

/// Certifies |f(x) - f(y)| <= d_c(x, y) + 1e-9 for all pairs of Y. On failure the
/// witness is the violating pair that comes first in rank order. When Y is the
/// whole space the per-coordinate characterization is used instead of the
/// quadratic pair scan.
inline Certification check_bounded_differences(const TabulatedFunction& f, const SubsetY& y,
                                               const WeightedMetric& metric, const ProductSpace& space,
                                               const ScanLimits& limits = {}) {
  detail::check_arity(metric, space);
  f.check_compatible(space);
  const auto ys = y.materialize(space, limits.enumeration_cap);
  if (ys.empty()) throw error(errc::empty_subset, "Y has no points");

  const rank_t total = space.checked_point_count(limits.enumeration_cap);
  if (ys.size() == total) {
    const auto values = f.tabulate(space, limits.enumeration_cap);
    auto witness = detail::neighbor_scan(space, values, metric, limits.enumeration_cap);
    if (!witness) return {};
    const double pairs = static_cast<double>(ys.size()) * static_cast<double>(ys.size());
    if (pairs <= static_cast<double>(limits.pair_cap)) {
      // A lower-rank non-neighbor pair may violate first.
      if (auto first = detail::pairwise_scan(space, ys, values, metric)) return {std::move(first)};
    }
    return {std::move(witness)};
  }

  const double pairs = static_cast<double>(ys.size()) * static_cast<double>(ys.size());
  if (pairs > static_cast<double>(limits.pair_cap)) {
    throw error(errc::scan_cap_exceeded, "|Y|^2 = " + std::to_string(pairs) + " exceeds the pair-scan cap");
  }
  std::vector<double> fy(ys.size());
  Point x;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (const auto* v = f.values()) {
      fy[j] = (*v)[ys[j]];
    } else {
      x = space.unrank(ys[j]);
      fy[j] = f.evaluate(space, ys[j], x);
    }
  }
  return {detail::pairwise_scan(space, ys, fy, metric)};
}

/// Smallest c for which f has c-bounded differences on the whole space:
/// c_i is the largest |f(x) - f(y)| over pairs differing only in coordinate i.
inline WeightedMetric tightest_full_space_c(const TabulatedFunction& f, const ProductSpace& space,
                                            rank_t cap = kDefaultEnumerationCap) {
  const auto values = f.tabulate(space, cap);
  std::vector<double> c(space.dimension(), 0.0);
  for_each_point(space, cap, [&](rank_t r, const Point& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (symbol_t s = x[i] + 1; s < space.alphabet_size(i); ++s) {
        const rank_t q = r + (s - x[i]) * space.stride(i);
        c[i] = std::max(c[i], std::abs(values[r] - values[q]));
      }
    }
  });
  return WeightedMetric(std::move(c));
}

}  // namespace hpconc
