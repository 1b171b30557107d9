#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "varexp/error.hpp"
#include "varexp/pipeline.hpp"
#include "varexp/report_io.hpp"

using namespace varexp;

namespace {

const Interval kUnit(0.0, 1.0);

ExperimentConfig config_for(StepProfile p, double gamma = 1.0) {
  ExperimentConfig c;
  const Interval I = p.interval();
  c.model = ModelSpec{std::move(p), StepProfile::constant(I, gamma), std::nullopt};
  return c;
}

}  // namespace

TEST(RunFull, ConstantExponent) {
  const auto r = run_full(config_for(StepProfile::constant(kUnit, 2.0)));
  ASSERT_TRUE(r.ok()) << r.message;
  EXPECT_NEAR(r.support_bound, 1.0, 1e-9);
  ASSERT_TRUE(r.distribution);
  EXPECT_NEAR((*r.distribution)(0.5), 1.0, 1e-6);
  EXPECT_NEAR((*r.distribution)(1.0 + 1e-6), 0.0, 1e-6);
  ASSERT_TRUE(r.rearrangement);
  EXPECT_NEAR(*r.rearrangement->r(0.5), 2.0, 1e-6);
  ASSERT_TRUE(r.truth);
  EXPECT_LT(r.truth->r_l1, 1e-6);
}

TEST(RunFull, TwoStep) {
  const auto r = run_full(config_for(StepProfile(kUnit, {0.5}, {2.0, 3.0})));
  ASSERT_TRUE(r.ok()) << r.message;
  EXPECT_NEAR(r.extremes->p_plus.exponent, 3.0, 1e-8);
  EXPECT_NEAR(r.extremes->p_minus.exponent, 2.0, 1e-8);
  EXPECT_NEAR(*r.rearrangement->r(0.25), 2.0, 1e-5);
  EXPECT_NEAR(*r.rearrangement->r(0.75), 3.0, 1e-5);
  EXPECT_LT(r.truth->distribution_sup_gap, 1e-5);
  EXPECT_FALSE(r.r_samples.empty());
}

TEST(RunFull, TableOfSquares) {
  const auto path = std::filesystem::temp_directory_path() / "varexp_squares.csv";
  {
    std::ofstream out(path);
    out << "m,lambda\n";
    for (double x = -12.0; x <= 12.0 + 1e-9; x += 0.125) {
      out.precision(17);
      out << std::pow(10.0, x) << "," << std::pow(10.0, 2.0 * x) << "\n";
    }
  }
  ExperimentConfig c;
  c.table = path.string();
  const auto r = run_full(c);
  std::filesystem::remove(path);
  ASSERT_TRUE(r.ok()) << r.message;
  EXPECT_NEAR(r.extremes->p_plus.exponent, 2.0, 1e-9);
  EXPECT_NEAR(r.extremes->level_min.value, 1.0, 1e-6);
  EXPECT_NEAR(*r.rearrangement->r(0.5), 2.0, 1e-5);
  EXPECT_FALSE(r.truth.has_value());
}

TEST(RunFull, WeightedOnlyStopsAfterMoments) {
  auto c = config_for(StepProfile::constant(kUnit, 2.0));
  c.model->gamma = StepProfile(kUnit, {0.5}, {1.0, 2.0});
  const auto r = run_full(c);
  EXPECT_TRUE(r.ok()) << r.message;
  EXPECT_TRUE(r.weighted_only);
  EXPECT_TRUE(r.moments.has_value());
  EXPECT_FALSE(r.rearrangement.has_value());
}

TEST(RunFull, ReportsFailureWithoutThrowing) {
  ExperimentConfig c;
  const auto r = run_full(c);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.failed_stage.empty());
}

TEST(RunFull, StageAsymptoticsOnly) {
  auto c = config_for(StepProfile(kUnit, {0.5}, {2.0, 3.0}));
  c.stage = Stage::asymptotics;
  const auto r = run_full(c);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.extremes.has_value());
  EXPECT_FALSE(r.moments.has_value());
}

TEST(GenerateProfile, DeterministicAndBounded) {
  const auto a = generate_profile(7, 9, {1.4, 3.5});
  const auto b = generate_profile(7, 9, {1.4, 3.5});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, generate_profile(8, 9, {1.4, 3.5}));
  EXPECT_EQ(a.pieces(), 9u);
  for (double v : a.values()) {
    EXPECT_GT(v, 1.4);
    EXPECT_LT(v, 3.5);
  }
  for (std::size_t j = 0; j < a.pieces(); ++j) EXPECT_GE(a.piece_length(j), 0.25 / 9 - 1e-15);
  try {
    generate_profile(1, 3, {0.8, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bad_bounds);
  }
  EXPECT_THROW(generate_profile(1, 3, {3.0, 2.0}), Error);
}

TEST(CompareDnMaps, Examples) {
  const auto one = StepProfile::constant(kUnit, 1.0);
  const ForwardModel a(StepProfile(kUnit, {0.5}, {2.0, 3.0}), one);
  const ForwardModel b(StepProfile(kUnit, {0.5}, {3.0, 2.0}), one);
  const ForwardModel c(StepProfile::constant(kUnit, 2.0), one);
  const auto grid = make_grid({1e-3, 1e3, 31, true});
  EXPECT_LT(compare_dn_maps(a, b, grid), 1e-14);
  EXPECT_EQ(compare_dn_maps(a, a, grid), 0.0);
  EXPECT_GT(compare_dn_maps(a, c, grid), 0.1);
}

TEST(Grid, ParseAndMake) {
  const auto g = parse_grid("1e-3,1e3,7,log");
  const auto v = make_grid(g);
  ASSERT_EQ(v.size(), 7u);
  EXPECT_DOUBLE_EQ(v[3], 1.0);
  EXPECT_DOUBLE_EQ(make_grid(parse_grid("0.5,1.5,5,lin"))[1], 0.75);
  EXPECT_THROW(parse_grid("1,2,3"), Error);
  EXPECT_THROW(parse_grid("0,1,5,log"), Error);
  EXPECT_THROW(parse_grid("1,2,x,lin"), Error);
}

TEST(Config, JsonRoundTrip) {
  auto c = config_for(StepProfile(kUnit, {0.5}, {2.0, 3.0}), 2.0);
  c.moments = 10;
  c.moment_options.scheme = DifferentiationScheme::finite_difference;
  c.reconstruction.method = ReconstructionMethod::legendre;
  c.reconstruction.basis_size = 9;
  c.asymptotics.decades = 4.0;
  c.seed = 42;
  c.stage = Stage::moments;
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.moments, 10);
  EXPECT_EQ(back.reconstruction.basis_size, 9);
  EXPECT_EQ(back.model->gamma.values()[0], 2.0);
}

TEST(Config, UnknownKeyIsParseError) {
  try {
    config_from_json(nlohmann::json::parse(R"({"moments": 8, "momnets": 9})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    EXPECT_NE(std::string(e.what()).find("momnets"), std::string::npos);
  }
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"reconstruction": {"basis": 4, "x": 1}})")),
               Error);
}

TEST(Config, BaseIsKeptForMissingKeys) {
  ExperimentConfig base;
  base.r_points = 17;
  const auto c = config_from_json(nlohmann::json::parse(R"({"moments": 8})"), base);
  EXPECT_EQ(c.r_points, 17);
  EXPECT_EQ(c.moments, 8);
}

TEST(Report, JsonHasNullForNaN) {
  const auto r = run_full(config_for(StepProfile::constant(kUnit, 2.0)));
  const auto j = to_json(r);
  EXPECT_EQ(j.at("status"), "ok");
  EXPECT_TRUE(j.contains("asymptotics"));
  auto weighted = config_for(StepProfile::constant(kUnit, 2.0));
  weighted.model->gamma = StepProfile(kUnit, {0.5}, {1.0, 2.0});
  const auto w = to_json(run_full(weighted));
  ASSERT_TRUE(w.contains("truth"));
  EXPECT_TRUE(w["truth"]["r_l1"].is_null());
  EXPECT_NO_THROW(nlohmann::json::parse(w.dump()));
}

TEST(Report, DistributionMomentsFromJson) {
  const auto d = distribution_moments_from_json(nlohmann::json::parse(R"({"d":[1,0.5,0.25],"M":2})"));
  EXPECT_EQ(d.N(), 2);
  EXPECT_EQ(d.M, 2.0);
  const auto c = distribution_moments_from_json(nlohmann::json::parse(R"({"c":[1,0.5,0.5],"M":1})"));
  EXPECT_DOUBLE_EQ(c.d[2], 0.25);
  EXPECT_THROW(distribution_moments_from_json(nlohmann::json::parse(R"({"d":[1]})")), Error);
}

TEST(Uniform, OpenUnitInterval) {
  Uniform u(3);
  Uniform v(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u();
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_EQ(x, v());
  }
}

TEST(Determinism, RunFullIsReproducible) {
  const auto c = config_for(generate_profile(11, 4, {1.5, 3.5}));
  auto a = to_json(run_full(c));
  auto b = to_json(run_full(c));
  a.erase("seconds");
  b.erase("seconds");
  EXPECT_EQ(a, b);
}
