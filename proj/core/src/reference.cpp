#include "varexp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp::reference {

namespace {

void check(const BruteForceConfig& config) {
  if (config.resolution < 1000) {
    throw Error(Errc::invalid_argument, "brute-force resolution must be at least 1000");
  }
}

// Value of a step profile at x by linear scan, independent of piece_at.
double value_at(const StepProfile& s, double x) {
  std::size_t j = 0;
  while (j < s.breaks().size() && s.breaks()[j] <= x) ++j;
  return s.values()[j];
}

}  // namespace

double dn_closed_form(double p, double gamma, const Interval& interval, double m) {
  if (!(p > 1.0) || !(gamma > 0.0) || !(m > 0.0)) {
    throw Error(Errc::invalid_argument, "closed form needs p > 1, gamma > 0, m > 0");
  }
  const double L = interval.length();
  const double K = gamma * std::pow(m / L, p - 1.0);
  return m * K;
}

double moments_exact(const StepProfile& p, const StepProfile& gamma, int n) {
  if (n < 0) throw Error(Errc::invalid_argument, "moment order must be >= 0");
  std::vector<double> xs{p.interval().a(), p.interval().b()};
  xs.insert(xs.end(), p.breaks().begin(), p.breaks().end());
  xs.insert(xs.end(), gamma.breaks().begin(), gamma.breaks().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double mid = 0.5 * (xs[i] + xs[i + 1]);
    const double f = 1.0 / (value_at(p, mid) - 1.0);
    total += (xs[i + 1] - xs[i]) * std::pow(value_at(gamma, mid), -f) * std::pow(f, n);
  }
  return total;
}

DistributionFn distribution_dense(const std::function<double(double)>& f, const Interval& interval,
                                  const BruteForceConfig& config) {
  check(config);
  const std::size_t n = config.resolution;
  const double h = interval.length() / static_cast<double>(n);
  std::vector<Level> levels;
  levels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    levels.push_back({f(interval.a() + (static_cast<double>(i) + 0.5) * h), h});
  }
  return DistributionFn(std::move(levels));
}

std::vector<double> increasing_rearrangement_dense(const std::function<double(double)>& f,
                                                   const Interval& interval,
                                                   const BruteForceConfig& config) {
  check(config);
  const std::size_t n = config.resolution;
  const double h = interval.length() / static_cast<double>(n);
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = f(interval.a() + (static_cast<double>(i) + 0.5) * h);
  std::sort(samples.begin(), samples.end());
  return samples;
}

double u_dense(const StepProfile& p, const StepProfile& gamma, double A, double B, double x,
               const BruteForceConfig& config) {
  check(config);
  if (!(A <= B)) throw Error(Errc::invalid_argument, "u_dense needs A <= B");
  const double a = p.interval().a();
  const double b = p.interval().b();
  if (!(x >= a && x <= b)) throw Error(Errc::out_of_range, "x outside the interval");
  if (A == B) return A;
  const std::size_t n = config.resolution;
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> f(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = a + (static_cast<double>(i) + 0.5) * h;
    f[i] = 1.0 / (value_at(p, xi) - 1.0);
    g[i] = value_at(gamma, xi);
  }
  auto mass = [&](double K, std::size_t upto) {
    double s = 0.0;
    for (std::size_t i = 0; i < upto; ++i) s += h * std::pow(K / g[i], f[i]);
    return s;
  };
  const double m = B - A;
  double lo = 1.0;
  double hi = 1.0;
  while (mass(lo, n) > m) lo *= 0.5;
  while (mass(hi, n) < m) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid, n) < m ? lo : hi) = mid;
  }
  const double K = 0.5 * (lo + hi);
  // Whole cells left of x plus the partial cell containing x.
  const std::size_t full = std::min(n, static_cast<std::size_t>((x - a) / h));
  double u = A + mass(K, full);
  if (full < n) u += (x - (a + static_cast<double>(full) * h)) * std::pow(K / g[full], f[full]);
  return u;
}

}  // namespace varexp::reference
