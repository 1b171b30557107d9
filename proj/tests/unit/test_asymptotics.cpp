#include <cmath>

#include <gtest/gtest.h>

#include "varexp/asymptotics.hpp"
#include "varexp/error.hpp"

using namespace varexp;

namespace {

const Interval kUnit(0.0, 1.0);

DnOracle power_table(double p, double lo = -12.0, double hi = 12.0) {
  std::vector<TableSample> s;
  for (double x = lo; x <= hi + 1e-9; x += 0.25) s.push_back({std::pow(10.0, x), std::pow(10.0, p * x)});
  return oracle_from_table(std::move(s));
}

DnOracle analytic(StepProfile p, double gamma = 1.0) {
  const Interval I = p.interval();
  return DnOracle::analytic(ForwardModel(std::move(p), StepProfile::constant(I, gamma)));
}

DnOracle halves() { return analytic(StepProfile(kUnit, {0.5}, {2.0, 3.0})); }

}  // namespace

TEST(Slope, PurePowerTwo) {
  const auto o = power_table(2.0);
  const auto lo = estimate_p_plus(o, 1e-6, 1e-3, 8);
  EXPECT_NEAR(lo.exponent, 2.0, 1e-12);
  EXPECT_TRUE(lo.converged);
  EXPECT_EQ(lo.m_grid.size(), 8u);
  EXPECT_NEAR(estimate_p_minus(o, 1e3, 1e6, 8).exponent, 2.0, 1e-12);
}

TEST(Slope, PurePowerOneAndHalf) {
  const auto o = power_table(1.5);
  EXPECT_NEAR(estimate_p_plus(o, 1e-6, 1e-3, 8).exponent, 1.5, 1e-12);
  EXPECT_NEAR(estimate_p_minus(o, 1e3, 1e6, 8).exponent, 1.5, 1e-12);
}

TEST(Slope, TwoStepWindows) {
  const auto o = halves();
  const auto plus = estimate_p_plus(o, 1e-6, 1e-3, 16);
  EXPECT_GE(plus.exponent, 2.98);
  EXPECT_LE(plus.exponent, 3.0);
  const auto minus = estimate_p_minus(o, 1e3, 1e6, 16);
  EXPECT_GE(minus.exponent, 2.0);
  EXPECT_LE(minus.exponent, 2.02);
}

TEST(Slope, SandwichAndTrend) {
  const auto o = analytic(StepProfile(kUnit, {0.2, 0.6}, {1.7, 3.4, 2.6}));
  double prev_plus = 0.0;
  double prev_minus = 10.0;
  for (double d : {2.0, 5.0, 10.0, 20.0}) {
    const double a = std::pow(10.0, -d);
    const double b = std::pow(10.0, d);
    const double plus = estimate_p_plus(o, a * 1e-3, a, 12).exponent;
    const double minus = estimate_p_minus(o, b, b * 1e3, 12).exponent;
    EXPECT_LE(plus, 3.4 + 1e-12);
    EXPECT_GE(minus, 1.7 - 1e-12);
    EXPECT_GE(plus, prev_plus - 1e-12);
    EXPECT_LE(minus, prev_minus + 1e-12);
    prev_plus = plus;
    prev_minus = minus;
  }
  EXPECT_NEAR(prev_plus, 3.4, 1e-6);
  EXPECT_NEAR(prev_minus, 1.7, 1e-6);
}

TEST(Slope, RejectsNarrowWindow) {
  try {
    estimate_p_plus(halves(), 1e-4, 5e-4, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ill_conditioned);
  }
  EXPECT_THROW(estimate_p_plus(halves(), 1e-6, 1e-3, 2), Error);
  EXPECT_THROW(estimate_p_plus(halves(), 10.0, 1e4, 8), Error);
  EXPECT_THROW(estimate_p_minus(halves(), 1e-4, 1e-1, 8), Error);
}

TEST(LevelSet, TwoStepHalves) {
  const auto o = halves();
  const auto hi = level_set_integral(o, 3.0, Extremum::max, 1e-3);
  EXPECT_NEAR(hi.value, 0.5, 1e-3);
  EXPECT_FALSE(hi.probes.empty());
  EXPECT_EQ(hi.probes.size(), hi.scaled.size());
  const auto lo = level_set_integral(o, 2.0, Extremum::min, 1e3);
  EXPECT_NEAR(lo.value, 0.5, 1e-3);
}

TEST(LevelSet, ConstantIsLength) {
  const auto o = analytic(StepProfile::constant(kUnit, 2.0));
  const auto r = level_set_integral(o, 2.0, Extremum::min, 1e3);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  EXPECT_TRUE(r.converged);
}

TEST(LevelSet, WeightedMass) {
  const auto o = analytic(StepProfile(kUnit, {0.25}, {3.0, 2.0}), 4.0);
  // gamma^{-1/(p-1)} = 4^{-1/2} on a set of length 0.25.
  const auto r = level_set_integral(o, 3.0, Extremum::max, 1e-6);
  EXPECT_NEAR(r.value, 0.125, 1e-4);
}

TEST(RecoverExtremes, DeepProbes) {
  const auto e = recover_extremes(analytic(StepProfile(kUnit, {0.3, 0.55}, {2.2, 1.6, 3.1})));
  EXPECT_NEAR(e.p_plus.exponent, 3.1, 1e-9);
  EXPECT_NEAR(e.p_minus.exponent, 1.6, 1e-9);
  EXPECT_NEAR(e.level_max.value, 0.45, 1e-3);
  EXPECT_NEAR(e.level_min.value, 0.25, 1e-3);
  EXPECT_NEAR(e.support_bound(), 1.0 / 0.6, 1e-8);
}

TEST(RecoverExtremes, ClipsTableWindows) {
  const auto e = recover_extremes(power_table(2.0));
  EXPECT_NEAR(e.p_plus.exponent, 2.0, 1e-12);
  EXPECT_NEAR(e.p_minus.exponent, 2.0, 1e-12);
  EXPECT_GE(e.p_plus.m_grid.front(), 1e-12 * (1 - 1e-12));
  EXPECT_LE(e.p_minus.m_grid.back(), 1e12 * (1 + 1e-12));
}
