#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "varexp/asymptotics.hpp"
#include "varexp/dn_oracle.hpp"
#include "varexp/moments.hpp"
#include "varexp/profile_io.hpp"
#include "varexp/rearrange.hpp"

namespace varexp {

enum class Stage { forward, asymptotics, moments, rearrange, full };

std::string_view to_string(Stage stage) noexcept;
Stage stage_from_string(std::string_view name);

struct GridSpec {
  double start = 1e-4;
  double stop = 1e4;
  int count = 25;
  bool log = true;
};

/// "start,stop,count,log|lin".
GridSpec parse_grid(const std::string& text);
std::vector<double> make_grid(const GridSpec& grid);

/// Every knob of a run. Defaults are the documented ones; to_json writes the
/// fully resolved configuration.
struct ExperimentConfig {
  std::optional<ModelSpec> model;    ///< ground truth and analytic oracle
  std::optional<std::string> table;  ///< CSV table oracle, used when no model
  double table_gamma = 1.0;          ///< declared constant gamma for tables

  Stage stage = Stage::full;
  SolveOptions solve;
  GridSpec m_grid;
  AsymptoticsConfig asymptotics;
  int moments = 12;
  MomentOptions moment_options;
  ReconstructionOptions reconstruction;
  int r_points = 1000;
  /// Half width of the band around true jumps excluded from the sup gap.
  double jump_band = 0.01;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Reads the keys present in doc on top of `base`. Unknown keys are an error.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

struct TruthMetrics {
  /// sup over t of |mu_rec(t) - mu_true(t)| outside the jump bands.
  double distribution_sup_gap = std::numeric_limits<double>::quiet_NaN();
  /// Same without exclusion.
  double distribution_sup_gap_full = std::numeric_limits<double>::quiet_NaN();
  /// L1 distance on [0, b - a] between recovered r and the increasing
  /// rearrangement of the true p.
  double r_l1 = std::numeric_limits<double>::quiet_NaN();
  double p_plus_error = 0.0;
  double p_minus_error = 0.0;
};

struct ReconstructionReport {
  std::string status = "ok";      ///< "ok" or the error name
  std::string failed_stage;
  std::string message;
  int exit_code = 0;

  std::optional<ExtremesEstimate> extremes;
  double support_bound = 0.0;
  std::optional<MomentSequence> moments;
  std::optional<DistributionMoments> distribution_moments;
  std::optional<DistributionFn> distribution;  ///< Lebesgue distribution of f = 1/(p - 1)
  std::optional<Rearrangement> rearrangement;
  std::vector<std::pair<double, double>> r_samples;
  bool weighted_only = false;
  std::optional<TruthMetrics> truth;
  std::map<std::string, double> seconds;

  bool ok() const noexcept { return exit_code == 0; }
};

nlohmann::json to_json(const ReconstructionReport& report);

/// Builds the oracle for a config: analytic from the model, else the table.
DnOracle make_oracle(const ExperimentConfig& config);

/// asymptotics -> M -> moments -> distribution -> rearrangement -> r.
/// Never throws for stage failures; the report carries the error.
ReconstructionReport run_full(const ExperimentConfig& config);

/// Reproducible profile on `interval` with values in (p_lo, p_hi). Piece
/// lengths are random but bounded below by a quarter of the mean length.
StepProfile generate_profile(std::uint64_t seed, int pieces, std::pair<double, double> bounds,
                             Interval interval = Interval(0.0, 1.0));

/// max over the grid of |Lambda1 - Lambda2| / Lambda1.
double compare_dn_maps(const ForwardModel& model1, const ForwardModel& model2,
                       const std::vector<double>& m_grid, const SolveOptions& options = {});

/// Lebesgue distribution of f = 1/(p - 1).
DistributionFn exponent_distribution(const StepProfile& p);

/// sup |mu1 - mu2| over t in [0, support], skipping |t - j| < band for the
/// given jump points.
double distribution_gap(const DistributionFn& mu1, const DistributionFn& mu2,
                        const std::vector<double>& jumps, double band);

/// L1 distance on [0, length] of two non-decreasing r profiles; each is
/// extended by its last value past its own end.
double r_l1_distance(const StepProfile& r1, const StepProfile& r2, double length);

/// Uniform random source used by the generators: mt19937_64 with the top
/// 53 bits mapped to the open interval (0, 1). The mapping is spelled out so
/// sequences do not depend on the standard library's distributions.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()();
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace varexp
