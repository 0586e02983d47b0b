#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hpconc/core.hpp"
#include "hpconc/random.hpp"

namespace hpconc {

/// A complete problem instance: space, f, Y and the weight vector c.
struct InstanceBundle {
  ProductSpace space;
  TabulatedFunction f;
  SubsetY y;
  WeightedMetric metric;
  std::string label;
  Params params;
};

namespace examples {

inline constexpr std::size_t kMaxHypercubeDimension = 26;

/// {0,1}^n with fair coordinates, Y = everything but the origin,
/// f = 2^n at the origin and 0 elsewhere, c = 0. Here p = 2^-n, mu = 1, m = 0.
inline InstanceBundle counterexample1(std::size_t n) {
  if (n < 1 || n > kMaxHypercubeDimension) {
    throw error(errc::invalid_argument, "counterexample1 needs 1 <= n <= 26");
  }
  const double height = std::ldexp(1.0, static_cast<int>(n));
  return InstanceBundle{
      ProductSpace::hypercube(n),
      TabulatedFunction::builtin("origin_spike", {{"height", height}}, height),
      SubsetY::builtin("exclude_origin"),
      WeightedMetric::zeros(n),
      "counterexample1",
      {{"n", static_cast<double>(n)}},
  };
}

/// {0,1}^n with fair coordinates, Y = everything but the two extreme points,
/// f = B at the origin, -B at (1,...,1) and (1/n) sum 2(x_i - 1) elsewhere;
/// c_i = 2/n. `centered` shifts f by +1 so that m = 0.
/// Needs n >= 2: for n = 1 the two extremes exhaust the space and Y is empty.
inline InstanceBundle toy_example(std::size_t n, double b, bool centered = false) {
  if (n < 2 || n > kMaxHypercubeDimension) {
    throw error(errc::invalid_argument, "toy example needs 2 <= n <= 26");
  }
  if (!(b >= 0.0) || !std::isfinite(b)) throw error(errc::invalid_argument, "B must be finite and non-negative");
  const double shift = centered ? 1.0 : 0.0;
  const double sup = centered ? std::max(b + 1.0, 1.0) : std::max(b, 2.0);
  return InstanceBundle{
      ProductSpace::hypercube(n),
      TabulatedFunction::builtin("toy", {{"B", b}, {"centered", shift}}, sup),
      SubsetY::builtin("exclude_extremes"),
      WeightedMetric(std::vector<double>(n, 2.0 / static_cast<double>(n))),
      centered ? "toy_centered" : "toy",
      {{"n", static_cast<double>(n)}, {"B", b}, {"centered", shift}},
  };
}

/// Per-coordinate maxima of |f(x) - f(y)| over pairs of Y that differ in that
/// coordinate only.
inline WeightedMetric tightest_neighbor_c_on_y(const ProductSpace& space, std::span<const double> values,
                                               std::span<const char> in_y) {
  std::vector<double> c(space.dimension(), 0.0);
  for_each_point(space, kDefaultEnumerationCap, [&](rank_t r, const Point& x) {
    if (!in_y[r]) return;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (symbol_t s = x[i] + 1; s < space.alphabet_size(i); ++s) {
        const rank_t q = r + (s - x[i]) * space.stride(i);
        if (in_y[q]) c[i] = std::max(c[i], std::abs(values[r] - values[q]));
      }
    }
  });
  return WeightedMetric(std::move(c));
}

inline constexpr int kRandomInstanceRetries = 1000;

/// Random instance with f certified to have c-bounded differences on Y.
///
/// Draws n in [1, max_n], alphabet sizes in [1, max_alphabet], coordinate laws
/// from normalized weights in [0.05, 1], f uniform on [-1, 1] over Y, and a
/// random non-empty Y. Off Y, f is scaled by a random factor in {1, 10, 1000}.
/// c is the tightest vector over neighbor pairs inside Y; the draw is repeated
/// until that c certifies pairwise on Y.
inline InstanceBundle random_certified_instance(std::uint64_t seed, std::size_t max_n = 6,
                                                std::size_t max_alphabet = 3) {
  if (max_n < 1 || max_n > 6 || max_alphabet < 1 || max_alphabet > 3) {
    throw error(errc::invalid_argument, "random instances need 1 <= n <= 6 and 1 <= alphabet <= 3");
  }
  Engine rng(substream_seed(seed, 0));
  for (int attempt = 0; attempt < kRandomInstanceRetries; ++attempt) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, max_n));
    std::vector<std::vector<double>> probs(n);
    for (auto& pi : probs) {
      pi.resize(uniform_int(rng, 1, max_alphabet));
      double total = 0.0;
      for (double& w : pi) total += (w = uniform(rng, 0.05, 1.0));
      for (double& w : pi) w /= total;
      // Renormalize the last entry so the sum is exactly representable as 1.
      double head = 0.0;
      for (std::size_t s = 0; s + 1 < pi.size(); ++s) head += pi[s];
      pi.back() = 1.0 - head;
    }
    ProductSpace space(std::move(probs));
    const rank_t total = *space.point_count();

    const double keep = uniform(rng, 0.5, 0.95);
    std::vector<char> in_y(total);
    std::vector<Point> excluded;
    for (rank_t r = 0; r < total; ++r) {
      in_y[r] = uniform01(rng) < keep ? 1 : 0;
      if (!in_y[r]) excluded.push_back(space.unrank(r));
    }
    if (excluded.size() == total) continue;

    static constexpr double kOutlierScale[] = {1.0, 10.0, 1000.0};
    const double outlier = kOutlierScale[uniform_int(rng, 0, 2)];
    std::vector<double> values(total);
    for (rank_t r = 0; r < total; ++r) {
      values[r] = uniform(rng, -1.0, 1.0) * (in_y[r] ? 1.0 : outlier);
    }

    auto metric = tightest_neighbor_c_on_y(space, values, in_y);
    auto f = TabulatedFunction::table(std::move(values));
    auto y = SubsetY::exclude(std::move(excluded));
    if (!check_bounded_differences(f, y, metric, space)) continue;

    return InstanceBundle{
        std::move(space), std::move(f), std::move(y), std::move(metric), "random",
        {{"seed", static_cast<double>(seed)}, {"n", static_cast<double>(n)}},
    };
  }
  throw error(errc::retry_exhausted, "no certified instance after " + std::to_string(kRandomInstanceRetries) +
                                         " draws for seed " + std::to_string(seed));
}

}  // namespace examples
}  // namespace hpconc
