#include "varexp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

namespace {

struct Derivatives {
  std::vector<long double> value;
  std::vector<long double> condition;
  double h_used = 0.0;
};

// D[n][k] = T_k^{(n)}(0), from T_{k+1}^{(n)}(0) = 2n T_k^{(n-1)}(0) - T_{k-1}^{(n)}(0).
std::vector<std::vector<long double>> chebyshev_derivatives_at_zero(int N, int degree) {
  std::vector<std::vector<long double>> D(N + 1, std::vector<long double>(degree + 1, 0.0L));
  for (int n = 0; n <= N; ++n) {
    D[n][0] = n == 0 ? 1.0L : 0.0L;
    if (degree >= 1) D[n][1] = n == 1 ? 1.0L : 0.0L;
    for (int k = 1; k < degree; ++k) {
      const long double lower = n == 0 ? 0.0L : D[n - 1][k];
      D[n][k + 1] = 2.0L * n * lower - D[n][k - 1];
    }
  }
  return D;
}

Derivatives chebyshev(const DnOracle& oracle, int N, int degree, double s0) {
  if (degree < N) {
    std::ostringstream os;
    os << "Chebyshev degree " << degree << " is below the requested order " << N;
    throw Error(Errc::invalid_argument, os.str());
  }
  const int K = 2 * degree;
  const long double pi = std::numbers::pi_v<long double>;
  std::vector<long double> theta(K);
  std::vector<long double> y(K);
  for (int j = 0; j < K; ++j) {
    theta[j] = pi * (j + 0.5L) / K;
    y[j] = std::exp(oracle.log_m_for_log_k(static_cast<long double>(s0) * std::cos(theta[j])));
  }
  const auto D = chebyshev_derivatives_at_zero(N, degree);

  // W[n][j]: weight of sample j in c_n, so c_n = sum_j W[n][j] y_j.
  Derivatives out;
  out.h_used = s0;
  long double scale = 1.0L;
  for (int n = 0; n <= N; ++n) {
    long double c = 0.0L;
    long double spread = 0.0L;
    for (int j = 0; j < K; ++j) {
      long double w = 0.0L;
      for (int k = 0; k <= degree; ++k) {
        const long double basis = (k == 0 ? 1.0L : 2.0L) / K * std::cos(k * theta[j]);
        w += D[n][k] * basis;
      }
      w /= scale;
      c += w * y[j];
      spread += (w * y[j]) * (w * y[j]);
    }
    out.value.push_back(c);
    out.condition.push_back(c != 0.0L ? std::sqrt(spread) / std::fabs(c)
                                      : std::numeric_limits<long double>::infinity());
    scale *= static_cast<long double>(s0);
  }
  return out;
}

long double binomial(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr double kMaxFdWindow = 0.5;

Derivatives finite_difference(const DnOracle& oracle, int N, double s0, int levels) {
  if (levels < 1) throw Error(Errc::invalid_argument, "Richardson needs at least one level");
  auto g = [&](long double s) { return std::exp(oracle.log_m_for_log_k(s)); };
  Derivatives out;
  for (int n = 0; n <= N; ++n) {
    if (n == 0) {
      out.value.push_back(g(0.0L));
      out.condition.push_back(1.0L);
      continue;
    }
    // Stencil points (n/2 - k) h, k = 0..n, span n h <= 2 min(s0, 1/2).
    const long double h0 = 2.0L * std::min(s0, kMaxFdWindow) / n;
    std::vector<std::vector<long double>> R(levels);
    long double spread = 0.0L;
    long double h = h0;
    for (int i = 0; i < levels; ++i) {
      long double sum = 0.0L;
      long double abs_sum = 0.0L;
      for (int k = 0; k <= n; ++k) {
        const long double term = binomial(n, k) * g((0.5L * n - k) * h);
        sum += (k % 2 == 0 ? term : -term);
        abs_sum += term;
      }
      const long double hn = std::pow(h, static_cast<long double>(n));
      R[i].push_back(sum / hn);
      spread = abs_sum / hn;
      for (int j = 1; j <= i; ++j) {
        const long double factor = std::pow(4.0L, static_cast<long double>(j)) - 1.0L;
        R[i].push_back(R[i][j - 1] + (R[i][j - 1] - R[i - 1][j - 1]) / factor);
      }
      if (i + 1 < levels) h *= 0.5L;
    }
    const long double value = R[levels - 1][levels - 1];
    out.value.push_back(value);
    // Richardson amplifies the last level's rounding by about 4^L / 3.
    const long double amp = std::pow(4.0L, static_cast<long double>(levels - 1));
    out.condition.push_back(value != 0.0L ? amp * spread / std::fabs(value)
                                          : std::numeric_limits<long double>::infinity());
    if (n == N) out.h_used = static_cast<double>(h);
  }
  return out;
}

}  // namespace

std::string_view to_string(DifferentiationScheme scheme) noexcept {
  return scheme == DifferentiationScheme::chebyshev ? "cheb" : "fd";
}

DifferentiationScheme scheme_from_string(std::string_view name) {
  if (name == "cheb" || name == "chebyshev") return DifferentiationScheme::chebyshev;
  if (name == "fd" || name == "finite_difference") return DifferentiationScheme::finite_difference;
  throw Error(Errc::invalid_argument, "unknown differentiation scheme \"" + std::string(name) + "\"");
}

double g_of_s(const DnOracle& oracle, double s, double tol) {
  if (!std::isfinite(s) || !(tol > 0.0)) {
    throw Error(Errc::invalid_argument, "g_of_s needs finite s and tol > 0");
  }
  const auto [m_lo, m_hi] = oracle.m_range();
  const bool bounded = !oracle.is_analytic();
  const double x_min = bounded ? std::log(m_lo) : -700.0;
  const double x_max = bounded ? std::log(m_hi) : 700.0;
  auto F = [&](double x) { return oracle.log_lambda(x) - x - s; };

  double lo = std::clamp(0.0, x_min, x_max);
  double hi = lo;
  const double f0 = F(lo);
  if (f0 == 0.0) return std::exp(lo);
  double step = 1.0;
  if (f0 < 0.0) {
    while (true) {
      hi = std::min(lo + step, x_max);
      if (F(hi) >= 0.0) break;
      if (hi == x_max) throw Error(Errc::out_of_range, "K = e^s beyond the oracle's m range");
      lo = hi;
      step *= 2.0;
    }
  } else {
    while (true) {
      lo = std::max(hi - step, x_min);
      if (F(lo) <= 0.0) break;
      if (lo == x_min) throw Error(Errc::out_of_range, "K = e^s below the oracle's m range");
      hi = lo;
      step *= 2.0;
    }
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::fabs(mid)) || mid == lo || mid == hi) {
      return std::exp(mid);
    }
    if (F(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw Error(Errc::no_convergence, "bisection for g(s) did not converge");
}

MomentSequence extract_moments(const DnOracle& oracle, int N, const MomentOptions& options,
                               std::optional<double> support_bound, bool weighted) {
  if (N < 0 || N > options.max_n) {
    std::ostringstream os;
    os << "moment order N = " << N << " outside [0, " << options.max_n << "]";
    throw Error(Errc::invalid_argument, os.str());
  }
  double s0 = options.window;
  if (!(s0 > 0.0)) {
    if (support_bound) {
      if (!(*support_bound > 0.0) || !std::isfinite(*support_bound)) {
        throw Error(Errc::invalid_argument, "support bound M must be finite and positive");
      }
      s0 = options.scaled_window / *support_bound;
    } else {
      s0 = 0.5;
    }
  }

  const Derivatives raw = options.scheme == DifferentiationScheme::chebyshev
                              ? chebyshev(oracle, N, options.degree, s0)
                              : finite_difference(oracle, N, s0, options.richardson_levels);

  MomentSequence out;
  out.weighted = weighted;
  out.scheme = options.scheme;
  out.h_used = raw.h_used;
  for (int n = 0; n <= N; ++n) {
    const double cond = static_cast<double>(raw.condition[n]);
    if (!(cond <= options.condition_limit)) {
      if (n == 0) throw Error(Errc::ill_conditioned, "c_0 could not be extracted reliably");
      out.truncated_from = N;
      break;
    }
    out.c.push_back(static_cast<double>(raw.value[n]));
    out.condition.push_back(cond);
    out.condition_estimate = std::max(out.condition_estimate, cond);
  }
  out.N = static_cast<int>(out.c.size()) - 1;
  if (!(out.c[0] > 0.0)) throw Error(Errc::ill_conditioned, "extracted c_0 is not positive");
  return out;
}

DistributionMoments to_distribution_moments(const MomentSequence& c, double M) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw Error(Errc::invalid_argument, "support bound M must be finite and positive");
  }
  if (c.c.size() < 2) throw Error(Errc::insufficient_moments, "need c_0 and at least c_1");
  DistributionMoments out;
  out.M = M;
  out.weighted = c.weighted;
  out.d.push_back(c.c[0]);
  for (std::size_t n = 1; n < c.c.size(); ++n) out.d.push_back(c.c[n] / static_cast<double>(n));
  return out;
}

}  // namespace varexp
