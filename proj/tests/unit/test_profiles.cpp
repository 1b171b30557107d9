#include <gtest/gtest.h>

#include "varexp/error.hpp"
#include "varexp/profile_io.hpp"
#include "varexp/profiles.hpp"

using namespace varexp;

namespace {

const Interval kUnit(0.0, 1.0);

StepProfile two_step(double left, double right) {
  return StepProfile(kUnit, {0.5}, {left, right});
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no varexp::Error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(Interval, RejectsEmptyOrInfinite) {
  EXPECT_EQ(code_of([] { Interval(1.0, 1.0); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { Interval(2.0, 1.0); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { Interval(0.0, INFINITY); }), Errc::invalid_argument);
  EXPECT_DOUBLE_EQ(Interval(-1.0, 2.5).length(), 3.5);
}

TEST(StepProfile, ConstructionInvariants) {
  EXPECT_THROW(StepProfile(kUnit, {0.5}, {1.0}), Error);
  EXPECT_THROW(StepProfile(kUnit, {0.6, 0.4}, {1.0, 2.0, 3.0}), Error);
  EXPECT_THROW(StepProfile(kUnit, {1.0}, {1.0, 2.0}), Error);
  EXPECT_THROW(StepProfile(kUnit, {0.5}, {1.0, 0.0}), Error);
  EXPECT_THROW(StepProfile(kUnit, {0.5}, {1.0, NAN}), Error);
}

TEST(StepProfile, RightContinuousEvaluation) {
  const StepProfile p(kUnit, {0.25, 0.5}, {2.0, 3.0, 4.0});
  EXPECT_EQ(p(0.0), 2.0);
  EXPECT_EQ(p(0.1), 2.0);
  EXPECT_EQ(p(0.25), 3.0);
  EXPECT_EQ(p(0.4), 3.0);
  EXPECT_EQ(p(0.5), 4.0);
  EXPECT_EQ(p(1.0), 4.0);
  EXPECT_EQ(code_of([&] { p(1.5); }), Errc::out_of_range);
}

TEST(StepProfile, PermutedKeepsLengthsWithValues) {
  const StepProfile p(kUnit, {0.25, 0.5}, {2.0, 3.0, 4.0});
  const std::size_t order[] = {2, 0, 1};
  const StepProfile q = p.permuted(order);
  EXPECT_EQ(q.values()[0], 4.0);
  EXPECT_DOUBLE_EQ(q.piece_length(0), 0.5);
  EXPECT_DOUBLE_EQ(q.piece_length(1), 0.25);
  const std::size_t bad[] = {0, 0, 1};
  EXPECT_THROW(p.permuted(bad), Error);
}

TEST(CommonRefinement, MergesBreaks) {
  const StepProfile p(kUnit, {0.5}, {2.0, 3.0});
  const StepProfile g(kUnit, {0.25, 0.75}, {1.0, 2.0, 4.0});
  const auto segs = common_refinement(p, g);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_EQ(segs[1].left, 0.25);
  EXPECT_EQ(segs[1].first, 2.0);
  EXPECT_EQ(segs[1].second, 2.0);
  EXPECT_EQ(segs[2].first, 3.0);
  EXPECT_EQ(segs[3].second, 4.0);
}

TEST(SampleProfile, MidpointSampling) {
  const auto p = sample_profile([](double x) { return 2.0 + x; }, kUnit, 4);
  ASSERT_EQ(p.pieces(), 4u);
  EXPECT_DOUBLE_EQ(p.values()[0], 2.125);
  EXPECT_DOUBLE_EQ(p.values()[3], 2.875);
  EXPECT_EQ(sample_profile([](double) { return 2.0; }, kUnit).pieces(), 4096u);
}

TEST(Validate, ConstantInsideBounds) {
  const auto s = validate(StepProfile::constant(kUnit, 2.0), StepProfile::constant(kUnit, 1.0), 0.4);
  EXPECT_EQ(s.eps, 0.4);
}

TEST(Validate, ImpossibleEpsIsBoundsViolation) {
  EXPECT_EQ(code_of([] {
              validate(StepProfile::constant(kUnit, 2.0), StepProfile::constant(kUnit, 1.0), 0.99);
            }),
            Errc::bounds_violation);
}

TEST(Validate, PiecewiseExponent) {
  EXPECT_NO_THROW(validate(two_step(1.5, 3.0), StepProfile::constant(kUnit, 1.0), 0.3));
}

TEST(Validate, NamesOffendingPiece) {
  try {
    validate(StepProfile(kUnit, {0.5}, {2.0, 9.0}), StepProfile::constant(kUnit, 1.0), 0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bounds_violation);
    EXPECT_NE(std::string(e.what()).find("piece 1"), std::string::npos);
  }
}

TEST(Validate, MonotoneInEps) {
  const StepProfile p(kUnit, {0.3, 0.6}, {1.4, 2.0, 2.9});
  const StepProfile g(kUnit, {0.5}, {0.5, 2.0});
  for (double eps = 0.34; eps > 0.0; eps -= 0.02) EXPECT_NO_THROW(validate(p, g, eps));
}

TEST(Stats, Examples) {
  auto s = stats(StepProfile::constant(kUnit, 2.0));
  EXPECT_EQ(s.p_plus, 2.0);
  EXPECT_EQ(s.p_minus, 2.0);
  EXPECT_EQ(s.f_sup, 1.0);
  s = stats(two_step(2.0, 3.0));
  EXPECT_EQ(s.p_plus, 3.0);
  EXPECT_EQ(s.p_minus, 2.0);
  EXPECT_EQ(s.f_sup, 1.0);
  s = stats(StepProfile(kUnit, {0.3, 0.6}, {1.5, 2.0, 4.0}));
  EXPECT_EQ(s.p_plus, 4.0);
  EXPECT_EQ(s.p_minus, 1.5);
  EXPECT_EQ(s.f_sup, 2.0);
}

TEST(FOfP, Examples) {
  EXPECT_EQ(f_of_p(StepProfile::constant(kUnit, 2.0)).values()[0], 1.0);
  auto f = f_of_p(two_step(2.0, 3.0));
  EXPECT_EQ(f.values()[0], 1.0);
  EXPECT_EQ(f.values()[1], 0.5);
  f = f_of_p(two_step(1.5, 5.0));
  EXPECT_EQ(f.values()[0], 2.0);
  EXPECT_EQ(f.values()[1], 0.25);
  EXPECT_EQ(code_of([] { f_of_p(two_step(0.5, 2.0)); }), Errc::degenerate_exponent);
}

TEST(ProfileJson, RoundTrip) {
  const StepProfile p(kUnit, {0.25, 0.5}, {2.0, 3.0, 4.0});
  EXPECT_EQ(profile_from_json(to_json(p)), p);
  const auto c = profile_from_json(nlohmann::json::parse(R"({"interval":[0,2],"constant":3})"));
  EXPECT_TRUE(c.is_constant());
  EXPECT_EQ(c.interval().b(), 2.0);
  EXPECT_EQ(code_of([] { profile_from_json(nlohmann::json::parse(R"({"pieces":{}})")); }),
            Errc::parse_error);
}

TEST(ModelJson, BareProfileMeansUnitGamma) {
  const auto m = model_from_json(nlohmann::json::parse(R"({"interval":[0,1],"constant":2})"));
  EXPECT_EQ(m.gamma.values()[0], 1.0);
  EXPECT_FALSE(m.eps.has_value());
  const auto n = model_from_json(to_json(ModelSpec{m.p, StepProfile::constant(kUnit, 4.0), 0.1}));
  EXPECT_EQ(n.gamma.values()[0], 4.0);
  EXPECT_EQ(*n.eps, 0.1);
}

TEST(ErrorCodes, NumericalClassification) {
  EXPECT_TRUE(is_numerical(Errc::no_convergence));
  EXPECT_TRUE(is_numerical(Errc::ill_posed));
  EXPECT_FALSE(is_numerical(Errc::parse_error));
  EXPECT_FALSE(is_numerical(Errc::out_of_range));
  EXPECT_EQ(to_string(Errc::bounds_violation), "BoundsViolation");
}
