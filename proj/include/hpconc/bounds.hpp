#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "hpconc/core.hpp"

namespace hpconc {

enum class BoundFormula { mcdiarmid, hp_one_sided, hp_two_sided };

inline const char* to_string(BoundFormula f) noexcept {
  switch (f) {
    case BoundFormula::mcdiarmid: return "mcdiarmid";
    case BoundFormula::hp_one_sided: return "hp_one_sided";
    case BoundFormula::hp_two_sided: return "hp_two_sided";
  }
  return "unknown";
}

/// Right-hand side of a tail bound together with its ingredients.
/// raw is the value before clamping to [0, 1]; total is the clamped value.
struct BoundReport {
  double epsilon = 0.0;
  double p = 0.0;
  double c_bar = 0.0;
  double sum_c_sq = 0.0;
  double exp_term = 1.0;
  double raw = 1.0;
  double total = 1.0;
  BoundFormula formula = BoundFormula::hp_one_sided;
};

namespace detail {

inline void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw error(errc::invalid_argument, "epsilon must be finite and non-negative");
  }
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw error(errc::invalid_argument, "p must lie in [0, 1]");
}

/// exp(-2 ((eps - p cbar)^+)^2 / sum c_i^2). With sum c_i^2 = 0 this takes its
/// limit: 1 when the positive part vanishes, 0 otherwise.
inline double exponential_term(double epsilon, double p, const WeightedMetric& metric) {
  const double slack = std::max(epsilon - p * metric.c_bar(), 0.0);
  if (metric.sum_sq() == 0.0) return slack == 0.0 ? 1.0 : 0.0;
  return std::exp(-2.0 * slack * slack / metric.sum_sq());
}

inline BoundReport assemble(double epsilon, double p, const WeightedMetric& metric, BoundFormula formula) {
  BoundReport r;
  r.epsilon = epsilon;
  r.p = p;
  r.c_bar = metric.c_bar();
  r.sum_c_sq = metric.sum_sq();
  r.exp_term = exponential_term(epsilon, p, metric);
  r.formula = formula;
  const double one_sided = p + r.exp_term;
  r.raw = formula == BoundFormula::hp_two_sided ? 2.0 * one_sided : one_sided;
  r.total = std::clamp(r.raw, 0.0, 1.0);
  return r;
}

}  // namespace detail

/// McDiarmid: P[f(X) - E f(X) >= eps] <= exp(-2 eps^2 / sum c_i^2).
inline BoundReport mcdiarmid_bound(double epsilon, const WeightedMetric& metric) {
  detail::check_epsilon(epsilon);
  return detail::assemble(epsilon, 0.0, metric, BoundFormula::mcdiarmid);
}

/// Bounded differences on Y only: P[f(X) - m >= eps] <= p + exp(-2 ((eps - p cbar)^+)^2 / sum c_i^2),
/// with m = E[f(X) | X in Y] and p = P[X not in Y].
inline BoundReport hp_bound(double epsilon, double p, const WeightedMetric& metric) {
  detail::check_epsilon(epsilon);
  detail::check_probability(p);
  return detail::assemble(epsilon, p, metric, BoundFormula::hp_one_sided);
}

/// Two-sided version: P[|f(X) - m| >= eps] <= 2 (p + exp(...)).
inline BoundReport hp_bound_two_sided(double epsilon, double p, const WeightedMetric& metric) {
  detail::check_epsilon(epsilon);
  detail::check_probability(p);
  return detail::assemble(epsilon, p, metric, BoundFormula::hp_two_sided);
}

/// |E f(X) - E[f(X) | X in Y]| <= 2 p F whenever |f| <= F.
inline double mean_gap_bound(double p, double sup_bound) {
  detail::check_probability(p);
  if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound)) {
    throw error(errc::invalid_argument, "F must be finite and non-negative");
  }
  return 2.0 * p * sup_bound;
}

/// The closed form 2^-n + exp(-2 n ((eps - 2^(1-n))^+)^2) quoted for the toy
/// instance. Kept only for side-by-side comparison with hp_bound; it is not
/// what hp_bound yields for that instance (there p = 2^(1-n) and sum c_i^2 = 4/n).
inline double toy_quoted_bound(std::size_t n, double epsilon) {
  if (n == 0) throw error(errc::invalid_argument, "n must be positive");
  const double nd = static_cast<double>(n);
  const double slack = std::max(epsilon - std::ldexp(1.0, 1 - static_cast<int>(n)), 0.0);
  return std::ldexp(1.0, -static_cast<int>(n)) + std::exp(-2.0 * nd * slack * slack);
}

}  // namespace hpconc
