#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "varexp/error.hpp"
#include "varexp/rearrange.hpp"

using namespace varexp;

namespace {

const Interval kUnit(0.0, 1.0);

std::vector<double> values_of(const StepProfile& p) { return {p.values().begin(), p.values().end()}; }

StepProfile halves_f() { return StepProfile(kUnit, {0.5}, {1.0, 0.5}); }

DistributionMoments moments_of(const DistributionFn& mu, int N, double M) {
  DistributionMoments d{{mu.total()}, M, false};
  for (int n = 1; n <= N; ++n) {
    double s = 0.0;
    for (const Level& l : mu.levels()) s += l.mass * std::pow(l.value, n) / n;
    d.d.push_back(s);
  }
  return d;
}

double l1_gap(const DistributionFn& a, const DistributionFn& b, double M) {
  const int cells = 20000;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double t = M * (i + 0.5) / cells;
    s += std::abs(a(t) - b(t));
  }
  return s * M / cells;
}

}  // namespace

TEST(DistributionOf, TwoStep) {
  const auto mu = distribution_of(halves_f());
  EXPECT_EQ(mu(0.0), 1.0);
  EXPECT_EQ(mu(0.49), 1.0);
  EXPECT_EQ(mu(0.5), 0.5);
  EXPECT_EQ(mu(0.99), 0.5);
  EXPECT_EQ(mu(1.0), 0.0);
  EXPECT_EQ(mu.total(), 1.0);
  EXPECT_EQ(mu.jumps(), (std::vector<double>{0.5, 1.0}));
}

TEST(DistributionOf, ConstantIsStep) {
  const auto mu = distribution_of(StepProfile::constant(kUnit, 0.7));
  EXPECT_EQ(mu(0.69), 1.0);
  EXPECT_EQ(mu(0.7), 0.0);
}

TEST(DistributionOf, WeightedByGamma) {
  const auto p = StepProfile::constant(kUnit, 2.0);
  const WeightedMeasure w(StepProfile::constant(kUnit, 4.0), p);
  const auto mu = distribution_of(f_of_p(p), w);
  EXPECT_DOUBLE_EQ(mu(0.0), 0.25);
  EXPECT_DOUBLE_EQ(w.total(), 0.25);
}

TEST(DistributionFn, CanonicalOrder) {
  const DistributionFn a({{0.5, 0.1}, {0.25, 0.3}, {0.5, 0.2}, {0.125, 0.7}});
  const DistributionFn b({{0.125, 0.7}, {0.5, 0.2}, {0.25, 0.3}, {0.5, 0.1}});
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.levels().size(), 3u);
  EXPECT_EQ(a.levels()[0].value, 0.5);
  EXPECT_EQ(DistributionFn({{1.0, 0.0}, {-1.0, 2.0}, {0.5, 1.0}}).levels().size(), 1u);
}

TEST(Legendre, ConstantMu) {
  DistributionMoments d{{1.0}, 1.0, false};
  for (int n = 1; n <= 8; ++n) d.d.push_back(1.0 / n);
  const auto e = legendre_expansion(d, 8, 0.0);
  for (double t : {0.05, 0.3, 0.77, 0.95}) EXPECT_NEAR(e(t), 1.0, 1e-10);
  ReconstructionOptions o;
  o.method = ReconstructionMethod::legendre;
  o.basis_size = 8;
  const auto mu = reconstruct_distribution(d, o);
  EXPECT_NEAR(mu(0.5), 1.0, 1e-6);
}

TEST(Legendre, TwoStepL1) {
  const auto truth = distribution_of(halves_f());
  ReconstructionOptions o;
  o.method = ReconstructionMethod::legendre;
  o.basis_size = 12;
  const auto mu = reconstruct_distribution(moments_of(truth, 12, 1.0), o);
  EXPECT_LE(l1_gap(mu, truth, 1.0), 0.05);
  EXPECT_FALSE(mu.coefficients().empty());
  for (double t = 0.0; t < 1.0; t += 0.01) EXPECT_GE(mu(t), mu(t + 0.01));
}

TEST(Legendre, ZeroMoments) {
  const DistributionMoments d{std::vector<double>(9, 0.0), 1.0, false};
  ReconstructionOptions o;
  o.method = ReconstructionMethod::legendre;
  o.basis_size = 8;
  EXPECT_EQ(reconstruct_distribution(d, o).total(), 0.0);
  EXPECT_EQ(reconstruct_distribution(d).total(), 0.0);
}

TEST(Legendre, MomentFidelity) {
  const auto truth = distribution_of(StepProfile(kUnit, {0.2, 0.6}, {0.9, 0.3, 0.6}));
  const auto d = moments_of(truth, 10, 1.0);
  const auto e = legendre_expansion(d, 10, 0.0);
  for (int n = 1; n <= 10; ++n) EXPECT_NEAR(e.moment(n), d.d[n], 1e-10) << n;
}

TEST(Atomic, ExactLevels) {
  const auto truth = distribution_of(StepProfile(kUnit, {0.25, 0.625}, {0.75, 0.25, 0.5}));
  const auto mu = reconstruct_distribution(moments_of(truth, 12, 1.0));
  ASSERT_EQ(mu.levels().size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(mu.levels()[k].value, truth.levels()[k].value, 1e-8);
    EXPECT_NEAR(mu.levels()[k].mass, truth.levels()[k].mass, 1e-8);
  }
}

TEST(Reconstruct, RejectsBadInput) {
  DistributionMoments d{{1.0, 0.5}, 1.0, false};
  EXPECT_THROW(reconstruct_distribution(d, {ReconstructionMethod::legendre, 0}), Error);
  d.M = -1.0;
  EXPECT_THROW(reconstruct_distribution(d), Error);
  EXPECT_THROW(method_from_string("spline"), Error);
}

TEST(Rearrangement, TwoStep) {
  const auto re = decreasing_rearrangement(distribution_of(StepProfile(kUnit, {0.5}, {0.5, 1.0})));
  EXPECT_EQ(re.f_star(0.0), 1.0);
  EXPECT_EQ(re.f_star(0.6), 0.5);
  EXPECT_EQ(*re.r(0.2), 2.0);
  EXPECT_EQ(*re.r(0.7), 3.0);
  EXPECT_FALSE(re.r(1.0).has_value());
  EXPECT_EQ(values_of(re.r_profile()), (std::vector<double>{2.0, 3.0}));
}

TEST(Rearrangement, IdempotentAndTotal) {
  const StepProfile f(Interval(0.0, 2.0), {0.25, 1.0, 1.5}, {0.3, 0.9, 0.1, 0.6});
  const auto mu = distribution_of(f);
  const auto re = decreasing_rearrangement(mu);
  EXPECT_EQ(mu(0.0), re.total());
  const auto again = decreasing_rearrangement(distribution_of(re.as_profile()));
  EXPECT_EQ(again.values(), re.values());
  EXPECT_TRUE(std::is_sorted(re.values().rbegin(), re.values().rend()));
}

TEST(Equimeasurable, PermutationAndGap) {
  const StepProfile f(kUnit, {0.25, 0.5}, {0.3, 0.9, 0.1});
  const std::size_t order[] = {1, 2, 0};
  const auto rep = equimeasurable(distribution_of(f), distribution_of(f.permuted(order)), 0.0);
  EXPECT_TRUE(rep.equal);
  EXPECT_EQ(rep.max_gap, 0.0);
  const auto other = equimeasurable(distribution_of(f), distribution_of(halves_f()), 1e-12);
  EXPECT_FALSE(other.equal);
  EXPECT_GT(other.max_gap, 0.2);
}

TEST(ComposeMonotone, Examples) {
  const auto p = compose_monotone(halves_f(), MonotoneMap::reciprocal_shift());
  EXPECT_EQ(values_of(p), (std::vector<double>{2.0, 3.0}));
  EXPECT_TRUE(MonotoneMap::reciprocal_shift().decreasing());
  EXPECT_FALSE(MonotoneMap::power(2.0).decreasing());
  EXPECT_EQ(values_of(compose_monotone(halves_f(), MonotoneMap::affine(2.0, 1.0))),
            (std::vector<double>{3.0, 2.0}));
  try {
    compose_monotone(halves_f(), MonotoneMap::log(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::domain_violation);
  }
  EXPECT_THROW(compose_monotone(halves_f(), MonotoneMap::affine(1.0, -2.0)), Error);
}

TEST(ComposeMonotone, IncreasingMapsCommuteWithRearrangement) {
  const StepProfile f(kUnit, {0.125, 0.5, 0.75}, {0.5, 0.25, 2.0, 1.0});
  const auto h = MonotoneMap::power(2.0);
  const auto lhs = decreasing_rearrangement(distribution_of(compose_monotone(f, h))).values();
  auto rhs = decreasing_rearrangement(distribution_of(f)).values();
  for (double& v : rhs) v = h(v);
  EXPECT_EQ(lhs, rhs);
}
