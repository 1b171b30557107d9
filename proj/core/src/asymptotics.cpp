#include "varexp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

namespace {

const double kLn10 = std::log(10.0);

SlopeEstimate fit_slope(const DnOracle& oracle, double m_min, double m_max, int n,
                        ProbeSide side) {
  if (n < 3) throw Error(Errc::invalid_argument, "slope fit needs n >= 3 probes");
  if (!(m_min > 0.0) || !(m_max > m_min) || !std::isfinite(m_max)) {
    throw Error(Errc::invalid_argument, "probe window needs 0 < m_min < m_max < inf");
  }
  const double x0 = std::log(m_min);
  const double x1 = std::log(m_max);
  if (x1 - x0 < kLn10 * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "probe window [" << m_min << ", " << m_max << "] spans less than one decade";
    throw Error(Errc::ill_conditioned, os.str());
  }

  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> ys(xs.size());
  for (int i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? x1 : x0 + (x1 - x0) * i / (n - 1);
    ys[i] = oracle.log_lambda(xs[i]);
  }

  // K_m = Lambda/m on the required side of 1 at the inner window end.
  const double tol = 1e-12 * std::max(1.0, std::fabs(x1));
  if (side == ProbeSide::small_m && ys.back() - xs.back() > tol) {
    throw Error(Errc::invalid_argument, "K_m > 1 at m_max; the small-m window is too large");
  }
  if (side == ProbeSide::large_m && ys.front() - xs.front() < -tol) {
    throw Error(Errc::invalid_argument, "K_m < 1 at m_min; the large-m window is too small");
  }

  double xm = 0.0;
  double ym = 0.0;
  for (int i = 0; i < n; ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  SlopeEstimate est;
  est.exponent = sxy / sxx;
  est.intercept = ym - est.exponent * xm;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (est.intercept + est.exponent * xs[i]);
    ss += r * r;
  }
  est.residual = std::sqrt(ss / n);
  est.side = side;
  est.converged = est.residual <= 1e-3;
  est.m_grid.reserve(xs.size());
  for (double x : xs) est.m_grid.push_back(std::exp(x));
  return est;
}

bool in_range(const DnOracle& oracle, double log_m) {
  const auto [lo, hi] = oracle.m_range();
  if (oracle.is_analytic()) return true;
  return log_m >= std::log(lo) && log_m <= std::log(hi);
}

}  // namespace

SlopeEstimate estimate_p_plus(const DnOracle& oracle, double m_min, double m_max, int n) {
  return fit_slope(oracle, m_min, m_max, n, ProbeSide::small_m);
}

SlopeEstimate estimate_p_minus(const DnOracle& oracle, double m_min, double m_max, int n) {
  return fit_slope(oracle, m_min, m_max, n, ProbeSide::large_m);
}

LevelSetIntegral level_set_integral(const DnOracle& oracle, double p_star, Extremum side,
                                    double m_probe, const LevelSetOptions& options) {
  if (!(p_star > 1.0) || !std::isfinite(p_star)) {
    throw Error(Errc::invalid_argument, "p_star must be a finite exponent > 1");
  }
  if (!(m_probe > 0.0) || !std::isfinite(m_probe)) {
    throw Error(Errc::invalid_argument, "m_probe must be finite and positive");
  }
  LevelSetIntegral out;
  out.side = side;
  const double direction = side == Extremum::min ? 1.0 : -1.0;
  const double x_start = std::log(m_probe);

  double previous = 0.0;
  bool have_previous = false;
  double estimate = 0.0;
  for (int k = 0; k < options.max_decades; ++k) {
    const double x = x_start + direction * k * kLn10;
    if (!in_range(oracle, x)) break;
    const double v = std::exp(oracle.log_lambda(x) - p_star * x);
    out.probes.push_back(std::exp(x));
    out.scaled.push_back(v);

    estimate = v;
    const std::size_t s = out.scaled.size();
    if (s >= 3) {
      const double v0 = out.scaled[s - 3];
      const double v1 = out.scaled[s - 2];
      const double v2 = out.scaled[s - 1];
      const double denom = v2 - 2.0 * v1 + v0;
      const double ratio = v1 != v0 ? (v2 - v1) / (v1 - v0) : 0.0;
      if (denom != 0.0 && std::fabs(ratio) < 0.95) {
        const double accelerated = v2 - (v2 - v1) * (v2 - v1) / denom;
        if (std::isfinite(accelerated) && accelerated > 0.0) estimate = accelerated;
      }
    }
    if (have_previous && std::fabs(estimate - previous) <= options.rel_tol * std::fabs(estimate)) {
      out.converged = true;
      break;
    }
    previous = estimate;
    have_previous = true;
  }

  out.limit_value = estimate;
  if (out.scaled.empty() || !(estimate > 0.0) || !std::isfinite(estimate)) {
    out.converged = false;
    out.value = 0.0;
    return out;
  }
  out.value = std::pow(estimate, 1.0 / (1.0 - p_star));
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

ExtremesEstimate recover_extremes(const DnOracle& oracle, const AsymptoticsConfig& config) {
  if (!(config.decades >= 1.0) || config.points_per_decade < 1 || !(config.depth >= 0.0)) {
    throw Error(Errc::invalid_argument, "asymptotics needs decades >= 1 and depth >= 0");
  }
  const int n = std::max(3, static_cast<int>(std::lround(config.decades * config.points_per_decade)) + 1);

  double small_lo = -(config.depth + config.decades) * kLn10;
  double small_hi = -config.depth * kLn10;
  double large_lo = config.depth * kLn10;
  double large_hi = (config.depth + config.decades) * kLn10;
  if (!oracle.is_analytic()) {
    const auto [lo, hi] = oracle.m_range();
    const double span = config.decades * kLn10;
    small_lo = std::log(lo);
    small_hi = std::min(std::log(hi), small_lo + span);
    large_hi = std::log(hi);
    large_lo = std::max(std::log(lo), large_hi - span);
    // Keep K_m <= 1 on the small side and K_m >= 1 on the large side.
    double x_unit = 0.0;
    try {
      x_unit = static_cast<double>(oracle.log_m_for_log_k(0.0L));
    } catch (const Error& e) {
      if (e.code() != Errc::out_of_range) throw;
      const bool all_below = oracle.log_lambda(std::log(hi)) < std::log(hi);
      x_unit = all_below ? std::log(hi) : std::log(lo);
    }
    small_hi = std::min(small_hi, x_unit);
    large_lo = std::max(large_lo, x_unit);
  }

  ExtremesEstimate out;
  out.p_plus = fit_slope(oracle, std::exp(small_lo), std::exp(small_hi), n, ProbeSide::small_m);
  out.p_minus = fit_slope(oracle, std::exp(large_lo), std::exp(large_hi), n, ProbeSide::large_m);

  // Start at the inner end of each window and move outwards.
  out.level_max = level_set_integral(oracle, out.p_plus.exponent, Extremum::max,
                                     std::exp(small_hi), config.level_set);
  out.level_min = level_set_integral(oracle, out.p_minus.exponent, Extremum::min,
                                     std::exp(large_lo), config.level_set);
  return out;
}

}  // namespace varexp
