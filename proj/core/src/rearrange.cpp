#include "varexp/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "varexp/error.hpp"

namespace varexp {

// ---------------------------------------------------------------- DistributionFn

DistributionFn::DistributionFn(std::vector<Level> levels, double support) {
  for (const auto& l : levels) {
    if (!std::isfinite(l.value) || !std::isfinite(l.mass)) {
      throw Error(Errc::invalid_argument, "distribution levels must be finite");
    }
  }
  // Levels at values <= 0 never count for t >= 0.
  std::erase_if(levels, [](const Level& l) { return !(l.mass > 0.0) || !(l.value > 0.0); });
  std::sort(levels.begin(), levels.end(), [](const Level& x, const Level& y) {
    return x.value != y.value ? x.value > y.value : x.mass < y.mass;
  });
  for (const auto& l : levels) {
    if (!levels_.empty() && levels_.back().value == l.value) {
      levels_.back().mass += l.mass;
    } else {
      levels_.push_back(l);
    }
  }
  cumulative_.reserve(levels_.size() + 1);
  cumulative_.push_back(0.0);
  for (const auto& l : levels_) cumulative_.push_back(cumulative_.back() + l.mass);
  total_ = cumulative_.back();
  support_ = std::max(support, levels_.empty() ? 0.0 : levels_.front().value);
}

double DistributionFn::operator()(double t) const {
  // Number of levels with value > t; levels_ is sorted by decreasing value.
  auto it = std::partition_point(levels_.begin(), levels_.end(),
                                 [t](const Level& l) { return l.value > t; });
  return cumulative_[static_cast<std::size_t>(it - levels_.begin())];
}

std::vector<double> DistributionFn::jumps() const {
  std::vector<double> out;
  out.reserve(levels_.size());
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) out.push_back(it->value);
  return out;
}

// ---------------------------------------------------------------- measures

WeightedMeasure::WeightedMeasure(StepProfile gamma, StepProfile p)
    : gamma_(std::move(gamma)), p_(std::move(p)) {
  if (!(gamma_.interval() == p_.interval())) {
    throw Error(Errc::invalid_argument, "gamma and p must share the same interval");
  }
  for (double v : p_.values()) {
    if (!(v > 1.0)) throw Error(Errc::degenerate_exponent, "weight exponent must exceed 1");
  }
}

double WeightedMeasure::total() const {
  double total = 0.0;
  for (const auto& s : common_refinement(gamma_, p_)) total += s.length() * density(s.first, s.second);
  return total;
}

namespace {

std::vector<double> merged_breaks(std::initializer_list<const StepProfile*> profiles) {
  std::vector<double> xs;
  for (const auto* p : profiles) xs.insert(xs.end(), p->breaks().begin(), p->breaks().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

DistributionFn distribution_of(const StepProfile& f) {
  std::vector<Level> levels;
  levels.reserve(f.pieces());
  for (std::size_t j = 0; j < f.pieces(); ++j) levels.push_back({f.values()[j], f.piece_length(j)});
  return DistributionFn(std::move(levels));
}

DistributionFn distribution_of(const StepProfile& f, const WeightedMeasure& measure) {
  if (!(f.interval() == measure.gamma().interval())) {
    throw Error(Errc::invalid_argument, "profile and measure must share the same interval");
  }
  const auto xs = merged_breaks({&f, &measure.gamma(), &measure.p()});
  std::vector<Level> levels;
  levels.reserve(xs.size() + 1);
  double left = f.interval().a();
  for (std::size_t i = 0; i <= xs.size(); ++i) {
    const double right = i < xs.size() ? xs[i] : f.interval().b();
    const double mid = 0.5 * (left + right);
    const double w = measure.density(measure.gamma()(mid), measure.p()(mid));
    levels.push_back({f(mid), (right - left) * w});
    left = right;
  }
  return DistributionFn(std::move(levels));
}

// ---------------------------------------------------------------- reconstruction

std::string_view to_string(ReconstructionMethod method) noexcept {
  return method == ReconstructionMethod::atomic ? "atomic" : "legendre";
}

ReconstructionMethod method_from_string(std::string_view name) {
  if (name == "atomic") return ReconstructionMethod::atomic;
  if (name == "legendre") return ReconstructionMethod::legendre;
  throw Error(Errc::invalid_argument, "unknown reconstruction method \"" + std::string(name) + "\"");
}

namespace {

// Coefficient of u^j in the shifted Legendre polynomial P_k(2u - 1).
double shifted_legendre_coefficient(int k, int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (k - j + i) / i;  // C(k, j)
  double d = 1.0;
  for (int i = 1; i <= j; ++i) d = d * (k + i) / i;      // C(k + j, j)
  return ((k + j) % 2 == 0 ? 1.0 : -1.0) * c * d;
}

// Non-increasing least-squares fit, pool adjacent violators.
std::vector<double> antitonic_fit(const std::vector<double>& y) {
  std::vector<double> mean;
  std::vector<std::size_t> count;
  for (double v : y) {
    mean.push_back(v);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
      const std::size_t n = count.back() + count[count.size() - 2];
      const double m = (mean.back() * count.back() + mean[mean.size() - 2] * count[count.size() - 2]) / n;
      mean.pop_back();
      count.pop_back();
      mean.back() = m;
      count.back() = n;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t b = 0; b < mean.size(); ++b) out.insert(out.end(), count[b], mean[b]);
  return out;
}

DistributionFn reconstruct_legendre(const DistributionMoments& d, const ReconstructionOptions& o) {
  if (o.grid < 1) throw Error(Errc::invalid_argument, "grid must have at least one cell");
  const auto expansion = legendre_expansion(d, o.basis_size, o.regularization);
  const double M = d.M;
  const double total = std::max(0.0, d.total());
  std::vector<double> mu(static_cast<std::size_t>(o.grid));
  for (int i = 0; i < o.grid; ++i) mu[i] = expansion((i + 0.5) * M / o.grid);
  mu = antitonic_fit(mu);
  for (double& v : mu) v = std::clamp(v, 0.0, total);

  // mu is mu_i on cell i; it drops by mu_i - mu_{i+1} at the cell's right edge.
  std::vector<Level> levels;
  for (int i = 0; i < o.grid; ++i) {
    const double next = i + 1 < o.grid ? mu[i + 1] : 0.0;
    levels.push_back({(i + 1) * M / o.grid, mu[i] - next});
  }
  DistributionFn out(std::move(levels), M);
  out.set_coefficients(expansion.alpha);
  return out;
}

struct AtomFit {
  std::vector<double> nodes;
  std::vector<double> weights;
  double residual = std::numeric_limits<double>::infinity();
};

// k atoms from the scaled moments m_0..m_N of a measure on [0, 1]: the
// Hankel null vector gives the node polynomial, a Vandermonde least
// squares gives the weights.
std::optional<AtomFit> fit_atoms(const Eigen::VectorXd& m, int k) {
  const int N = static_cast<int>(m.size()) - 1;
  Eigen::MatrixXd H(N - k + 1, k + 1);
  for (int i = 0; i <= N - k; ++i)
    for (int j = 0; j <= k; ++j) H(i, j) = m(i + j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeFullV);
  const Eigen::VectorXd q = svd.matrixV().col(k);
  if (std::fabs(q(k)) < 1e-14 * q.cwiseAbs().maxCoeff()) return std::nullopt;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) companion(i, k - 1) = -q(i) / q(k);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  if (eig.info() != Eigen::Success) return std::nullopt;

  AtomFit fit;
  for (int i = 0; i < k; ++i) {
    const std::complex<double> z = eig.eigenvalues()(i);
    if (std::fabs(z.imag()) > 1e-8 * std::max(1.0, std::fabs(z.real()))) return std::nullopt;
    if (z.real() < -1e-6 || z.real() > 1.05) return std::nullopt;
    fit.nodes.push_back(z.real());
  }
  Eigen::MatrixXd V(N + 1, k);
  for (int i = 0; i < k; ++i) {
    double power = 1.0;
    for (int n = 0; n <= N; ++n) {
      V(n, i) = power;
      power *= fit.nodes[i];
    }
  }
  const Eigen::VectorXd w = V.colPivHouseholderQr().solve(m);
  const double scale = w.cwiseAbs().sum();
  for (int i = 0; i < k; ++i) {
    if (w(i) < -1e-8 * scale) return std::nullopt;
    fit.weights.push_back(w(i));
  }
  fit.residual = (V * w - m).norm() / m.norm();
  return fit;
}

DistributionFn reconstruct_atomic(const DistributionMoments& d, const ReconstructionOptions& o) {
  const int N = d.N();
  const int k_max = std::min(o.basis_size / 2, (N + 1) / 2);
  if (k_max < 1) {
    throw Error(Errc::insufficient_moments, "atomic reconstruction needs N >= 1 and basis >= 2");
  }
  // Moments of the measure of f-values, rescaled to [0, 1].
  Eigen::VectorXd m(N + 1);
  double power = 1.0;
  for (int n = 0; n <= N; ++n) {
    m(n) = (n == 0 ? d.d[0] : n * d.d[n]) / power;
    power *= d.M;
  }
  if (m.norm() == 0.0) return DistributionFn({}, d.M);

  std::optional<AtomFit> best;
  for (int k = 1; k <= k_max; ++k) {
    auto fit = fit_atoms(m, k);
    if (!fit) continue;
    if (fit->residual <= o.atom_tol) {
      best = std::move(fit);
      break;
    }
    if (!best || fit->residual < best->residual) best = std::move(fit);
  }
  if (!best) throw Error(Errc::ill_posed, "no admissible atomic measure matches the moments");

  std::vector<Level> levels;
  for (std::size_t i = 0; i < best->nodes.size(); ++i) {
    levels.push_back({best->nodes[i] * d.M, best->weights[i]});
  }
  return DistributionFn(std::move(levels), d.M);
}

}  // namespace

double LegendreExpansion::operator()(double t) const {
  if (alpha.empty()) return 0.0;
  const double x = 2.0 * t / M - 1.0;
  double p_prev = 1.0;
  double p = x;
  double sum = alpha[0] * std::sqrt(1.0 / M);
  for (std::size_t k = 1; k < alpha.size(); ++k) {
    sum += alpha[k] * std::sqrt((2.0 * k + 1.0) / M) * p;
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  return sum;
}

double LegendreExpansion::moment(int n) const {
  if (n < 1) throw Error(Errc::invalid_argument, "moments are indexed from n = 1");
  double total = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const int kk = static_cast<int>(k);
    double s = 0.0;
    for (int j = 0; j <= kk; ++j) s += shifted_legendre_coefficient(kk, j) / (n + j);
    total += alpha[k] * std::sqrt((2.0 * kk + 1.0) / M) * s;
  }
  return total * std::pow(M, n);
}

LegendreExpansion legendre_expansion(const DistributionMoments& d, int basis_size,
                                     double regularization) {
  if (basis_size < 1) throw Error(Errc::invalid_argument, "basis size must be at least 1");
  if (!(regularization >= 0.0)) throw Error(Errc::invalid_argument, "ridge must be >= 0");
  if (!(d.M > 0.0)) throw Error(Errc::invalid_argument, "support bound M must be positive");
  if (d.N() < basis_size) {
    std::ostringstream os;
    os << "basis size " << basis_size << " needs d_1..d_" << basis_size << ", have N = " << d.N();
    throw Error(Errc::insufficient_moments, os.str());
  }
  LegendreExpansion out;
  out.M = d.M;
  const double limit = 1e8 * std::max(1.0, std::fabs(d.total()) * std::sqrt(d.M));
  for (int k = 0; k < basis_size; ++k) {
    double s = 0.0;
    double scale = 1.0;
    for (int j = 0; j <= k; ++j) {
      s += shifted_legendre_coefficient(k, j) * d.d[j + 1] / scale;
      scale *= d.M;
    }
    double alpha = std::sqrt((2.0 * k + 1.0) / d.M) * s;
    const double kk = static_cast<double>(k) * (k + 1);
    alpha /= 1.0 + regularization * kk * kk;
    if (!std::isfinite(alpha) || std::fabs(alpha) > limit) {
      std::ostringstream os;
      os << "Legendre coefficient " << k << " = " << alpha << " blew up";
      throw Error(Errc::ill_posed, os.str());
    }
    out.alpha.push_back(alpha);
  }
  return out;
}

DistributionFn reconstruct_distribution(const DistributionMoments& d,
                                        const ReconstructionOptions& options) {
  if (d.d.empty()) throw Error(Errc::insufficient_moments, "no moments supplied");
  if (!(d.M > 0.0) || !std::isfinite(d.M)) {
    throw Error(Errc::invalid_argument, "support bound M must be finite and positive");
  }
  return options.method == ReconstructionMethod::atomic ? reconstruct_atomic(d, options)
                                                         : reconstruct_legendre(d, options);
}

// ---------------------------------------------------------------- rearrangement

Rearrangement::Rearrangement(const DistributionFn& mu) {
  double w = 0.0;
  for (const auto& l : mu.levels()) {
    w += l.mass;
    breaks_.push_back(w);
    values_.push_back(l.value);
  }
  total_ = w;
}

double Rearrangement::f_star(double x) const {
  if (x < 0.0) throw Error(Errc::out_of_range, "f* is defined on [0, inf)");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

std::optional<double> Rearrangement::r(double x) const {
  const double f = f_star(x);
  if (!(f > 0.0)) return std::nullopt;
  return 1.0 + 1.0 / f;
}

StepProfile Rearrangement::as_profile() const {
  if (!(total_ > 0.0)) throw Error(Errc::invalid_argument, "f* vanishes identically");
  std::vector<double> breaks;
  std::vector<double> values{values_.front()};
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
    const double x = breaks_[k];
    // A level too light to move the cumulative sum has no extent.
    if (x > (breaks.empty() ? 0.0 : breaks.back()) && x < total_) {
      breaks.push_back(x);
      values.push_back(values_[k + 1]);
    }
  }
  return StepProfile(Interval(0.0, total_), std::move(breaks), std::move(values));
}

StepProfile Rearrangement::r_profile() const {
  return as_profile().map([](double f) { return 1.0 + 1.0 / f; });
}

Rearrangement decreasing_rearrangement(const DistributionFn& mu) { return Rearrangement(mu); }

EquimeasurabilityReport equimeasurable(const DistributionFn& mu1, const DistributionFn& mu2,
                                       double tol) {
  std::vector<double> ts{0.0};
  for (const auto& l : mu1.levels()) ts.push_back(l.value);
  for (const auto& l : mu2.levels()) ts.push_back(l.value);
  EquimeasurabilityReport out;
  for (double t : ts) {
    const double gap = std::fabs(mu1(t) - mu2(t));
    if (gap > out.max_gap) {
      out.max_gap = gap;
      out.at = t;
    }
  }
  out.equal = out.max_gap <= tol;
  return out;
}

// ---------------------------------------------------------------- monotone maps

bool MonotoneMap::in_domain(double t) const {
  switch (kind) {
    case Kind::affine:
    case Kind::exp:
      return std::isfinite(t);
    case Kind::power:
    case Kind::reciprocal_shift:
      return t > 0.0 && std::isfinite(t);
    case Kind::log:
      return t > 0.0 && std::isfinite(t) && std::log(t) + b > 0.0;
  }
  return false;
}

double MonotoneMap::operator()(double t) const {
  switch (kind) {
    case Kind::affine: return a * t + b;
    case Kind::power: return std::pow(t, a);
    case Kind::reciprocal_shift: return 1.0 + 1.0 / t;
    case Kind::exp: return std::exp(a * t);
    case Kind::log: return std::log(t) + b;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool MonotoneMap::decreasing() const {
  switch (kind) {
    case Kind::affine:
    case Kind::power:
    case Kind::exp:
      return a < 0.0;
    case Kind::reciprocal_shift:
      return true;
    case Kind::log:
      return false;
  }
  return false;
}

StepProfile compose_monotone(const StepProfile& profile, const MonotoneMap& h) {
  if ((h.kind == MonotoneMap::Kind::affine || h.kind == MonotoneMap::Kind::power ||
       h.kind == MonotoneMap::Kind::exp) &&
      !(h.a != 0.0 && std::isfinite(h.a))) {
    throw Error(Errc::invalid_argument, "monotone map parameter a must be finite and nonzero");
  }
  std::vector<double> values;
  values.reserve(profile.pieces());
  for (std::size_t j = 0; j < profile.pieces(); ++j) {
    const double t = profile.values()[j];
    const double v = h.in_domain(t) ? h(t) : std::numeric_limits<double>::quiet_NaN();
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "piece " << j << " value " << t << " leaves the domain of the map";
      throw Error(Errc::domain_violation, os.str());
    }
    values.push_back(v);
  }
  return StepProfile(profile.interval(),
                     std::vector<double>(profile.breaks().begin(), profile.breaks().end()),
                     std::move(values));
}

}  // namespace varexp
