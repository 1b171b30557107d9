#pragma once

#include <vector>

#include "varexp/dn_oracle.hpp"

namespace varexp {

enum class ProbeSide { small_m, large_m };
enum class Extremum { min, max };

/// Least-squares slope of log Lambda against log m.
struct SlopeEstimate {
  double exponent = 0.0;
  double intercept = 0.0;   ///< fitted log Lambda at log m = 0
  std::vector<double> m_grid;
  double residual = 0.0;    ///< RMS of the fit in log Lambda
  ProbeSide side = ProbeSide::small_m;
  bool converged = true;    ///< false when residual > 1e-3
};

/// Small-m slope, tends to p+ as m_min -> 0. Requires m_max <= 1 region
/// with K_m <= 1, n >= 3 and at least one decade.
SlopeEstimate estimate_p_plus(const DnOracle& oracle, double m_min, double m_max, int n);

/// Large-m slope, tends to p- as m_min -> infinity. Requires K_m >= 1.
SlopeEstimate estimate_p_minus(const DnOracle& oracle, double m_min, double m_max, int n);

struct LevelSetOptions {
  int max_decades = 8;
  double rel_tol = 1e-4;
};

struct LevelSetIntegral {
  Extremum side = Extremum::min;
  /// Integral of gamma^{-1/(p*-1)} over the level set {p = p*}.
  double value = 0.0;
  /// Extrapolated limit of m^{-p*} Lambda(m).
  double limit_value = 0.0;
  bool converged = false;
  std::vector<double> probes;
  std::vector<double> scaled;  ///< m^{-p*} Lambda(m) at each probe
};

/// side = min probes m_probe, 10 m_probe, ...; side = max probes
/// m_probe, m_probe / 10, ... Successive values are Aitken-accelerated and
/// the sweep stops once the relative change drops below rel_tol.
LevelSetIntegral level_set_integral(const DnOracle& oracle, double p_star, Extremum side,
                                    double m_probe, const LevelSetOptions& options = {});

struct AsymptoticsConfig {
  /// Probe windows are [10^-(depth+decades), 10^-depth] and
  /// [10^depth, 10^(depth+decades)]; table oracles clip them to their range.
  double depth = 200.0;
  double decades = 6.0;
  int points_per_decade = 4;
  LevelSetOptions level_set;
};

struct ExtremesEstimate {
  SlopeEstimate p_plus;
  SlopeEstimate p_minus;
  LevelSetIntegral level_max;
  LevelSetIntegral level_min;

  /// 1/(p- - 1), the support bound of f = 1/(p - 1).
  double support_bound() const { return 1.0 / (p_minus.exponent - 1.0); }
};

ExtremesEstimate recover_extremes(const DnOracle& oracle, const AsymptoticsConfig& config = {});

}  // namespace varexp
