#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "hpconc/bounds.hpp"
#include "hpconc/random.hpp"

using namespace hpconc;

namespace {

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

WeightedMetric uniform_weights(std::size_t n, double w) { return WeightedMetric(std::vector<double>(n, w)); }

}  // namespace

TEST(McDiarmid, Examples) {
  EXPECT_EQ(mcdiarmid_bound(0.0, WeightedMetric({0.3, 2.0})).total, 1.0);
  // exp(-2 * 4 / 4), 30-digit reference 0.135335283236612691893999494972
  EXPECT_NEAR(mcdiarmid_bound(2.0, uniform_weights(4, 1.0)).total, 0.135335283236612691894, 1e-15);
  EXPECT_EQ(mcdiarmid_bound(0.1, WeightedMetric::zeros(2)).total, 0.0);
  EXPECT_EQ(mcdiarmid_bound(0.0, WeightedMetric::zeros(2)).total, 1.0);
  EXPECT_THROW(mcdiarmid_bound(-0.1, uniform_weights(2, 1.0)), error);
}

TEST(HpBound, Examples) {
  const auto c = uniform_weights(10, 0.2);
  // p = 2^-10, eps = 0.5: 30-digit references computed offline.
  const auto r = hp_bound(0.5, std::ldexp(1.0, -10), c);
  EXPECT_NEAR(r.exp_term, 0.289310883240723442736809473584, 1e-14);
  EXPECT_NEAR(r.total, 0.290287445740723442736809473584, 1e-14);
  EXPECT_NEAR(r.c_bar, 2.0, 1e-15);
  EXPECT_NEAR(r.sum_c_sq, 0.4, 1e-15);
  EXPECT_EQ(r.formula, BoundFormula::hp_one_sided);

  EXPECT_EQ(hp_bound(0.0, 0.3, c).total, 1.0);
  EXPECT_EQ(hp_bound(0.0, 0.3, c).raw, 1.3);
  EXPECT_THROW(hp_bound(0.5, 1.5, c), error);
  EXPECT_THROW(hp_bound(0.5, -0.1, c), error);
  EXPECT_THROW(hp_bound(-1.0, 0.1, c), error);
}

TEST(HpBound, ZeroWeightsConvention) {
  const auto zero = WeightedMetric::zeros(3);
  EXPECT_EQ(hp_bound(0.1, 0.125, zero).exp_term, 0.0);
  EXPECT_EQ(hp_bound(0.1, 0.125, zero).total, 0.125);
  EXPECT_EQ(hp_bound(0.0, 0.125, zero).exp_term, 1.0);
}

TEST(HpBound, ReducesToMcDiarmidBitwise) {
  Engine rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = uniform_int(rng, 1, 10);
    std::vector<double> c(n);
    for (double& w : c) w = uniform(rng, 0.0, 2.0);
    const WeightedMetric metric(c);
    const double eps = uniform(rng, 0.0, 5.0);
    const auto a = hp_bound(eps, 0.0, metric);
    const auto b = mcdiarmid_bound(eps, metric);
    EXPECT_TRUE(bitwise_equal(a.total, b.total));
    EXPECT_TRUE(bitwise_equal(a.exp_term, b.exp_term));
  }
}

TEST(HpBoundTwoSided, DoublesThenClamps) {
  const auto c = uniform_weights(5, 0.3);
  Engine rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = uniform(rng, 0.0, 3.0), p = uniform(rng, 0.0, 0.2);
    const auto one = hp_bound(eps, p, c);
    const auto two = hp_bound_two_sided(eps, p, c);
    EXPECT_EQ(two.raw, 2.0 * one.raw);
    EXPECT_EQ(two.total, std::min(1.0, 2.0 * one.raw));
    EXPECT_EQ(two.formula, BoundFormula::hp_two_sided);
  }
  EXPECT_EQ(hp_bound_two_sided(0.0, 0.01, c).total, 1.0);
  // Positive part vanishes: 2 (0.5 + 1) clamped.
  const auto big = hp_bound_two_sided(0.5, 0.5, uniform_weights(4, 10.0));
  EXPECT_EQ(big.raw, 3.0);
  EXPECT_EQ(big.total, 1.0);
}

TEST(HpBound, MonotonicityOnRandomGrids) {
  Engine rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = uniform_int(rng, 1, 8);
    std::vector<double> c(n);
    for (double& w : c) w = uniform(rng, 0.01, 1.0);
    const WeightedMetric metric(c);
    const double eps = uniform(rng, 0.0, 3.0), p = uniform(rng, 0.0, 0.5);
    const auto base = hp_bound(eps, p, metric);
    EXPECT_GE(base.total, 0.0);
    EXPECT_LE(base.total, 1.0);
    EXPECT_LE(hp_bound(eps + uniform(rng, 0.0, 1.0), p, metric).total, base.total);
    EXPECT_GE(hp_bound(eps, std::min(1.0, p + uniform(rng, 0.0, 0.1)), metric).total, base.total);
    auto wider = c;
    wider[uniform_int(rng, 0, n - 1)] += uniform(rng, 0.0, 1.0);
    EXPECT_GE(hp_bound(eps, p, WeightedMetric(wider)).total, base.total);
  }
}

TEST(MeanGapBound, Examples) {
  EXPECT_EQ(mean_gap_bound(0.0, 123.0), 0.0);
  EXPECT_EQ(mean_gap_bound(0.125, 8.0), 2.0);
  EXPECT_DOUBLE_EQ(mean_gap_bound(0.01, 100.0), 2.0);
  EXPECT_THROW(mean_gap_bound(1.1, 1.0), error);
  EXPECT_THROW(mean_gap_bound(0.1, -1.0), error);
}

TEST(ToyQuotedBound, ClosedForm) {
  // 2^-4 + exp(-2 * 4 * (0.5 - 2^-3)^2)
  EXPECT_DOUBLE_EQ(toy_quoted_bound(4, 0.5), 0.0625 + std::exp(-8.0 * 0.375 * 0.375));
  EXPECT_DOUBLE_EQ(toy_quoted_bound(4, 0.0), 1.0625);
}
