#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hpconc/core.hpp"
#include "hpconc/parallel.hpp"

namespace hpconc {

/// Dense table of an extension of f from Y to the whole space, in rank order.
struct ExtensionTable {
  std::vector<double> values;
  WeightedMetric metric;
  /// min over Y of f
  double y_min = 0.0;
};

struct ExtendOptions {
  /// Certify bounded differences on Y first and throw not_certified on failure.
  bool verify = false;
  ScanLimits limits{};
  Parallelism parallelism{};
};

namespace detail {

enum class Envelope { upper, lower };

inline ExtensionTable mcshane(const TabulatedFunction& f, const SubsetY& y, const WeightedMetric& metric,
                              const ProductSpace& space, const ExtendOptions& options, Envelope side) {
  check_arity(metric, space);
  const rank_t total = space.checked_point_count(options.limits.enumeration_cap);
  const auto ys = y.materialize(space, options.limits.enumeration_cap);
  if (ys.empty()) throw error(errc::empty_subset, "Y has no points");
  if (options.verify) {
    const auto cert = check_bounded_differences(f, y, metric, space, options.limits);
    if (!cert) {
      throw error(errc::not_certified, "f does not have c-bounded differences on Y (|f(x)-f(y)| = " +
                                           std::to_string(cert.violation->delta_f) + " > d_c = " +
                                           std::to_string(cert.violation->distance) + ")");
    }
  }

  const auto values = f.tabulate(space, options.limits.enumeration_cap);
  const std::size_t n = space.dimension();
  const auto ycoords = gather_coords(space, ys);
  std::vector<double> fy(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) fy[j] = values[ys[j]];

  ExtensionTable out;
  out.metric = metric;
  out.y_min = *std::min_element(fy.begin(), fy.end());
  out.values.resize(total);

  constexpr rank_t kBlock = 256;
  const std::size_t blocks = static_cast<std::size_t>((total + kBlock - 1) / kBlock);
  std::span<const symbol_t> yc(ycoords);
  parallel_blocks(blocks, options.parallelism, [&](std::size_t b) {
    std::vector<symbol_t> x(n);
    const rank_t end = std::min<rank_t>(total, (b + 1) * kBlock);
    for (rank_t r = b * kBlock; r < end; ++r) {
      rank_t rem = r;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<symbol_t>(rem / space.stride(i));
        rem %= space.stride(i);
      }
      double best = side == Envelope::upper ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const double d = metric.distance(x, yc.subspan(j * n, n));
        if (side == Envelope::upper) {
          best = std::min(best, fy[j] + d);
        } else {
          best = std::max(best, fy[j] - d);
        }
      }
      out.values[r] = best;
    }
  });
  return out;
}

}  // namespace detail

/// Largest c-Lipschitz extension of f from Y: fbar(x) = min over y in Y of f(y) + d_c(x, y).
/// When f has c-bounded differences on Y, fbar agrees with f on Y and has
/// c-bounded differences on the whole space. Without that hypothesis the
/// formula is still evaluated, but agreement on Y may fail.
inline ExtensionTable extend(const TabulatedFunction& f, const SubsetY& y, const WeightedMetric& metric,
                             const ProductSpace& space, const ExtendOptions& options = {}) {
  return detail::mcshane(f, y, metric, space, options, detail::Envelope::upper);
}

/// Smallest c-Lipschitz extension: max over y in Y of f(y) - d_c(x, y).
/// Any c-Lipschitz extension of f|Y lies between this and extend().
inline ExtensionTable lower_extend(const TabulatedFunction& f, const SubsetY& y, const WeightedMetric& metric,
                                   const ProductSpace& space, const ExtendOptions& options = {}) {
  return detail::mcshane(f, y, metric, space, options, detail::Envelope::lower);
}

}  // namespace hpconc
