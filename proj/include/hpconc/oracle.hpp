#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hpconc/bounds.hpp"
#include "hpconc/core.hpp"
#include "hpconc/extension.hpp"
#include "hpconc/parallel.hpp"
#include "hpconc/random.hpp"
#include "hpconc/summation.hpp"

namespace hpconc {

/// Exact moments of f by enumeration.
struct ExactReport {
  double p = 0.0;   ///< P[X not in Y]
  double mu = 0.0;  ///< E f(X)
  double m = 0.0;   ///< E[f(X) | X in Y]
  std::optional<double> M;  ///< E fbar(X), when the extension was requested
  double c_bar = 0.0;
  std::uint64_t y_count = 0;
};

enum class TailSide { upper, two_sided };

struct TailPoint {
  double epsilon = 0.0;
  double exact_tail = 0.0;
  double p = 0.0;
  double exp_term = 0.0;
  double bound_total = 0.0;
  bool dominated = false;
};

struct DominanceResult {
  ExactReport stats;
  double center = 0.0;
  TailSide side = TailSide::upper;
  std::vector<TailPoint> points;

  bool all_dominated() const noexcept {
    return std::all_of(points.begin(), points.end(), [](const TailPoint& t) { return t.dominated; });
  }
};

struct MCReport {
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t in_y = 0;
  double center = 0.0;
  double p_hat = 0.0;
  std::optional<double> p_se;
  std::optional<double> m_hat;
  std::optional<double> m_se;
  std::vector<double> epsilons;
  std::vector<double> tail_hat;
  std::vector<std::optional<double>> tail_se;

  friend bool operator==(const MCReport&, const MCReport&) = default;
};

struct OracleOptions {
  ScanLimits limits{};
  Parallelism parallelism{};
};

/// Slack allowed between an exact tail and a bound before a point counts as a violation.
inline constexpr double kDominanceTolerance = 1e-12;

namespace detail {

/// Probability and f value of every point, rank order, with the total mass.
struct Tabulation {
  std::vector<double> prob;
  std::vector<double> value;
  double mass = 1.0;
};

inline Tabulation tabulate_law(const ProductSpace& space, const TabulatedFunction& f, rank_t cap) {
  Tabulation t;
  t.value = f.tabulate(space, cap);
  t.prob = point_probabilities(space, cap);
  t.mass = pairwise_sum(t.prob);
  return t;
}

template <class Pred>
double masked_mass(const Tabulation& t, Pred&& keep) {
  std::vector<double> terms(t.prob.size());
  for (std::size_t r = 0; r < terms.size(); ++r) terms[r] = keep(r) ? t.prob[r] : 0.0;
  return pairwise_sum(terms);
}

inline ExactReport exact_stats_impl(const ProductSpace& space, const Tabulation& t, std::span<const rank_t> ys,
                                    const WeightedMetric& metric) {
  if (ys.empty()) throw error(errc::empty_subset, "Y has no points");
  std::vector<char> in_y(t.prob.size(), 0);
  for (rank_t r : ys) in_y[r] = 1;

  const std::size_t count = t.prob.size();
  std::vector<double> all_terms(count), y_terms(count), y_mass(count), out_mass(count);
  for (std::size_t r = 0; r < count; ++r) {
    all_terms[r] = t.prob[r] * t.value[r];
    y_terms[r] = in_y[r] ? all_terms[r] : 0.0;
    y_mass[r] = in_y[r] ? t.prob[r] : 0.0;
    out_mass[r] = in_y[r] ? 0.0 : t.prob[r];
  }
  const double py = pairwise_sum(y_mass);
  if (py <= 0.0) throw error(errc::empty_subset, "Y has zero probability, so E[f | Y] is undefined");

  ExactReport rep;
  rep.p = pairwise_sum(out_mass) / t.mass;
  rep.mu = pairwise_sum(all_terms) / t.mass;
  rep.m = pairwise_sum(y_terms) / py;
  rep.c_bar = metric.c_bar();
  rep.y_count = ys.size();
  (void)space;
  return rep;
}

inline double tail_mass(const Tabulation& t, double center, double epsilon, TailSide side) {
  return masked_mass(t, [&](std::size_t r) {
           const double dev = t.value[r] - center;
           return side == TailSide::upper ? dev >= epsilon : std::abs(dev) >= epsilon;
         }) /
         t.mass;
}

}  // namespace detail

/// p, mu, m (and M = E fbar when requested) by exact enumeration. Sums run in
/// rank order with pairwise summation; expectations are normalized by the
/// enumerated total mass.
inline ExactReport exact_stats(const ProductSpace& space, const TabulatedFunction& f, const SubsetY& y,
                               const WeightedMetric& metric, bool with_extension = false,
                               const OracleOptions& options = {}) {
  detail::check_arity(metric, space);
  const auto t = detail::tabulate_law(space, f, options.limits.enumeration_cap);
  const auto ys = y.materialize(space, options.limits.enumeration_cap);
  auto rep = detail::exact_stats_impl(space, t, ys, metric);
  if (with_extension) {
    const auto ext = extend(f, y, metric, space, ExtendOptions{false, options.limits, options.parallelism});
    std::vector<double> terms(t.prob.size());
    for (std::size_t r = 0; r < terms.size(); ++r) terms[r] = t.prob[r] * ext.values[r];
    rep.M = pairwise_sum(terms) / t.mass;
  }
  return rep;
}

/// P[f(X) - center >= eps] (or P[|f(X) - center| >= eps]) with exact comparisons on doubles.
inline double exact_tail(const ProductSpace& space, const TabulatedFunction& f, double center, double epsilon,
                         TailSide side = TailSide::upper, rank_t cap = kDefaultEnumerationCap) {
  const auto t = detail::tabulate_law(space, f, cap);
  return detail::tail_mass(t, center, epsilon, side);
}

/// P[pred(f(X))] by enumeration.
template <class Pred>
double exact_probability(const ProductSpace& space, const TabulatedFunction& f, Pred&& pred,
                         rank_t cap = kDefaultEnumerationCap) {
  const auto t = detail::tabulate_law(space, f, cap);
  return detail::masked_mass(t, [&](std::size_t r) { return pred(t.value[r]); }) / t.mass;
}

/// Compares the exact tail around `center` (default m) against hp_bound at
/// every epsilon of the grid. The caller is responsible for having certified
/// bounded differences on Y; an undominated point then means a defect.
inline DominanceResult dominance_check(const ProductSpace& space, const TabulatedFunction& f, const SubsetY& y,
                                       const WeightedMetric& metric, std::span<const double> eps_grid,
                                       std::optional<double> center = std::nullopt,
                                       TailSide side = TailSide::upper, const OracleOptions& options = {}) {
  detail::check_arity(metric, space);
  const auto t = detail::tabulate_law(space, f, options.limits.enumeration_cap);
  const auto ys = y.materialize(space, options.limits.enumeration_cap);

  DominanceResult res;
  res.stats = detail::exact_stats_impl(space, t, ys, metric);
  res.center = center.value_or(res.stats.m);
  res.side = side;
  res.points.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const auto bound = side == TailSide::upper ? hp_bound(eps, res.stats.p, metric)
                                               : hp_bound_two_sided(eps, res.stats.p, metric);
    TailPoint tp;
    tp.epsilon = eps;
    tp.exact_tail = detail::tail_mass(t, res.center, eps, side);
    tp.p = res.stats.p;
    tp.exp_term = bound.exp_term;
    tp.bound_total = bound.total;
    tp.dominated = tp.exact_tail <= tp.bound_total + kDominanceTolerance;
    res.points.push_back(tp);
  }
  return res;
}

/// Samples per Monte Carlo chunk. Chunk k draws from substream_seed(seed, k),
/// so results do not depend on the number of worker threads.
inline constexpr std::uint64_t kMonteCarloChunk = std::uint64_t{1} << 16;

namespace detail {

struct ChunkStats {
  std::uint64_t in_y = 0;
  double mean = 0.0;  // of f over in-Y samples
  double m2 = 0.0;
  std::vector<std::uint64_t> tail;
};

/// Inverse-CDF sampler for one coordinate.
class CoordinateSampler {
 public:
  explicit CoordinateSampler(const std::vector<double>& probs) {
    cdf_.reserve(probs.size());
    double acc = 0.0;
    for (std::size_t s = 0; s < probs.size(); ++s) {
      acc += probs[s];
      cdf_.push_back(acc);
      if (probs[s] > 0.0) last_ = static_cast<symbol_t>(s);
    }
  }

  symbol_t operator()(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto s = static_cast<symbol_t>(it - cdf_.begin());
    return std::min(s, last_);
  }

 private:
  std::vector<double> cdf_;
  symbol_t last_ = 0;
};

}  // namespace detail

/// Plain Monte Carlo estimates of p, m (ratio estimator over in-Y samples) and
/// the tail P[f(X) - center >= eps] for each eps. Standard errors come from
/// the sample variance and are absent when fewer than two samples contribute.
inline MCReport mc_estimate(const ProductSpace& space, const TabulatedFunction& f, const SubsetY& y, double center,
                            std::span<const double> eps_grid, std::uint64_t seed, std::uint64_t samples,
                            TailSide side = TailSide::upper, const OracleOptions& options = {}) {
  if (samples == 0) throw error(errc::invalid_argument, "samples must be at least 1");
  f.check_compatible(space);
  y.check_compatible(space);
  const bool needs_rank = f.is_table();

  std::vector<detail::CoordinateSampler> samplers;
  samplers.reserve(space.dimension());
  for (const auto& probs : space.probs()) samplers.emplace_back(probs);

  const std::uint64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<detail::ChunkStats> parts(chunks);
  parallel_blocks(chunks, options.parallelism, [&](std::size_t k) {
    auto& st = parts[k];
    st.tail.assign(eps_grid.size(), 0);
    Engine rng(substream_seed(seed, k));
    const std::uint64_t begin = k * kMonteCarloChunk;
    const std::uint64_t end = std::min(samples, begin + kMonteCarloChunk);
    Point x;
    x.coords.resize(space.dimension());
    for (std::uint64_t s = begin; s < end; ++s) {
      rank_t r = 0;
      for (std::size_t i = 0; i < samplers.size(); ++i) {
        x[i] = samplers[i](uniform01(rng));
        if (needs_rank) r += x[i] * space.stride(i);
      }
      const double v = f.evaluate(space, r, x);
      if (y.contains(space, x)) {
        ++st.in_y;
        const double delta = v - st.mean;
        st.mean += delta / static_cast<double>(st.in_y);
        st.m2 += delta * (v - st.mean);
      }
      const double dev = v - center;
      for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        const bool hit = side == TailSide::upper ? dev >= eps_grid[e] : std::abs(dev) >= eps_grid[e];
        st.tail[e] += hit ? 1 : 0;
      }
    }
  });

  // Chan et al. merge, in chunk order.
  std::uint64_t in_y = 0;
  double mean = 0.0, m2 = 0.0;
  std::vector<std::uint64_t> tail(eps_grid.size(), 0);
  for (const auto& st : parts) {
    if (st.in_y > 0) {
      const double na = static_cast<double>(in_y), nb = static_cast<double>(st.in_y);
      const double delta = st.mean - mean;
      const double nt = na + nb;
      mean += delta * nb / nt;
      m2 += st.m2 + delta * delta * na * nb / nt;
      in_y += st.in_y;
    }
    for (std::size_t e = 0; e < tail.size(); ++e) tail[e] += st.tail[e];
  }

  const double n = static_cast<double>(samples);
  auto proportion_se = [&](double q) -> std::optional<double> {
    if (samples < 2) return std::nullopt;
    return std::sqrt(q * (1.0 - q) / (n - 1.0));
  };

  MCReport rep;
  rep.seed = seed;
  rep.samples = samples;
  rep.in_y = in_y;
  rep.center = center;
  rep.p_hat = static_cast<double>(samples - in_y) / n;
  rep.p_se = proportion_se(rep.p_hat);
  if (in_y > 0) rep.m_hat = mean;
  if (in_y > 1) rep.m_se = std::sqrt(m2 / static_cast<double>(in_y - 1) / static_cast<double>(in_y));
  rep.epsilons.assign(eps_grid.begin(), eps_grid.end());
  for (std::uint64_t hits : tail) {
    const double q = static_cast<double>(hits) / n;
    rep.tail_hat.push_back(q);
    rep.tail_se.push_back(proportion_se(q));
  }
  return rep;
}

}  // namespace hpconc
