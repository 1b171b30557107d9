#include "varexp/forward.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

namespace {

// (K / gamma)^{1/(p-1)} with the K/gamma == 1 case short-circuited.
double power_ratio(double K, double gamma, double exponent) {
  const double ratio = K / gamma;
  if (ratio == 1.0) return 1.0;
  return std::exp(exponent * std::log(ratio));
}

}  // namespace

Solution::Solution(double A, double B, double K, std::vector<double> knots,
                   std::vector<double> values)
    : A_(A), B_(B), K_(K), knots_(std::move(knots)), values_(std::move(values)) {}

double Solution::operator()(double x) const {
  if (!(x >= knots_.front() && x <= knots_.back())) {
    throw Error(Errc::out_of_range, "solution evaluated outside the interval");
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) return values_.back();
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  const double x0 = knots_[j - 1];
  const double x1 = knots_[j];
  const double t = (x - x0) / (x1 - x0);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

ForwardModel::ForwardModel(StepProfile p, StepProfile gamma)
    : p_(std::move(p)),
      gamma_(std::move(gamma)),
      assumptions_(validate(p_, gamma_, admissible_eps(p_, gamma_))) {
  build_pieces();
}

ForwardModel::ForwardModel(StepProfile p, StepProfile gamma, double eps)
    : p_(std::move(p)), gamma_(std::move(gamma)), assumptions_(validate(p_, gamma_, eps)) {
  build_pieces();
}

void ForwardModel::build_pieces() {
  const auto segments = common_refinement(p_, gamma_);
  pieces_.reserve(segments.size());
  exponent_min_ = std::numeric_limits<double>::infinity();
  exponent_max_ = 0.0;
  for (const auto& s : segments) {
    const double exponent = 1.0 / (s.first - 1.0);
    const long double log_weight =
        std::log(static_cast<long double>(s.length())) -
        static_cast<long double>(exponent) * std::log(static_cast<long double>(s.second));
    pieces_.push_back({s.left, s.right, exponent, s.first, s.second, log_weight});
    exponent_min_ = std::min(exponent_min_, exponent);
    exponent_max_ = std::max(exponent_max_, exponent);
  }
}

double ForwardModel::m_of_K(double K) const {
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw Error(Errc::invalid_argument, "K must be positive and finite");
  }
  double m = 0.0;
  for (const auto& piece : pieces_) {
    m += (piece.right - piece.left) * power_ratio(K, piece.gamma, piece.exponent);
  }
  if (!std::isfinite(m) || !(m > 0.0)) {
    std::ostringstream os;
    os << "m(K) not representable at K = " << K;
    throw Error(Errc::overflow, os.str());
  }
  return m;
}

long double ForwardModel::log_m_of_log_K(long double y) const {
  long double top = -std::numeric_limits<long double>::infinity();
  for (const auto& piece : pieces_) {
    top = std::max(top, piece.log_weight + static_cast<long double>(piece.exponent) * y);
  }
  long double sum = 0.0L;
  for (const auto& piece : pieces_) {
    sum += std::exp(piece.log_weight + static_cast<long double>(piece.exponent) * y - top);
  }
  return top + std::log(sum);
}

double ForwardModel::log_K_of_log_m(double log_m, const SolveOptions& options) const {
  if (!std::isfinite(log_m)) throw Error(Errc::invalid_argument, "log m must be finite");

  // F(y) = log m(e^y) - log m is increasing and convex in y, with slope in
  // [exponent_min, exponent_max]; Newton from the right end of a bracket
  // therefore approaches the root monotonically. Bisection guards it.
  const long double target = log_m;
  auto eval = [&](long double y, long double& slope) {
    long double top = -std::numeric_limits<long double>::infinity();
    for (const auto& piece : pieces_) {
      top = std::max(top, piece.log_weight + static_cast<long double>(piece.exponent) * y);
    }
    long double sum = 0.0L;
    long double weighted = 0.0L;
    for (const auto& piece : pieces_) {
      const long double w =
          std::exp(piece.log_weight + static_cast<long double>(piece.exponent) * y - top);
      sum += w;
      weighted += w * static_cast<long double>(piece.exponent);
    }
    slope = weighted / sum;
    return top + std::log(sum) - target;
  };

  int iterations = 0;
  long double slope = 0.0L;
  long double y = 0.0L;
  long double fy = eval(y, slope);
  if (fy == 0.0L) return 0.0;

  // Bracket expansion from K = 1; the factor applied to K squares each step
  // (log-step doubles), so K = 1e-300 is reached in about ten steps.
  long double lo = 0.0L;
  long double hi = 0.0L;
  long double flo = fy;
  long double fhi = fy;
  long double step = std::log(2.0L);
  const long double direction = fy < 0.0L ? 1.0L : -1.0L;
  long double edge = 0.0L;
  long double fedge = fy;
  while (true) {
    if (++iterations > options.max_iterations) {
      throw Error(Errc::no_convergence, "could not bracket K_m");
    }
    const long double next = edge + direction * step;
    long double s = 0.0L;
    const long double fnext = eval(next, s);
    if ((fnext >= 0.0L) == (direction > 0.0L)) {
      if (direction > 0.0L) {
        lo = edge; flo = fedge; hi = next; fhi = fnext;
      } else {
        lo = next; flo = fnext; hi = edge; fhi = fedge;
      }
      break;
    }
    edge = next;
    fedge = fnext;
    step *= 2.0L;
  }
  (void)flo;

  y = hi;
  fy = eval(y, slope);
  (void)fhi;
  while (true) {
    if (fy == 0.0L) break;
    if (++iterations > options.max_iterations) {
      throw Error(Errc::no_convergence, "Newton/bisection iteration limit reached for K_m");
    }
    long double candidate = y - fy / slope;
    if (!(candidate > lo && candidate < hi)) candidate = 0.5L * (lo + hi);
    long double s = 0.0L;
    const long double fc = eval(candidate, s);
    if (fc > 0.0L) {
      hi = candidate;
    } else {
      lo = candidate;
    }
    const long double change = std::fabs(candidate - y);
    y = candidate;
    fy = fc;
    slope = s;
    const long double scale = std::max(1.0L, std::fabs(y));
    if (change <= 8.0L * LDBL_EPSILON * scale || hi - lo <= 4.0L * LDBL_EPSILON * scale) break;
  }

  // Residual in m, relative: |m(K)/m - 1| <= tol * max(1, m) / m.
  const long double m = std::exp(target);
  const long double allowed =
      std::max(static_cast<long double>(options.tol) * std::max(1.0L, m) / m,
               64.0L * DBL_EPSILON * std::max(1.0L, std::fabs(target)));
  if (!(std::fabs(std::expm1(fy)) <= allowed)) {
    std::ostringstream os;
    os << "K_m residual " << static_cast<double>(std::fabs(std::expm1(fy)))
       << " above tolerance at log m = " << log_m;
    throw Error(Errc::no_convergence, os.str());
  }
  return static_cast<double>(y);
}

double ForwardModel::solve_K(double m, const SolveOptions& options) const {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(Errc::invalid_argument, "K_m is defined for finite m > 0");
  }
  const double K = std::exp(log_K_of_log_m(std::log(m), options));
  if (!std::isfinite(K) || !(K > 0.0)) {
    std::ostringstream os;
    os << "K_m not representable at m = " << m;
    throw Error(Errc::overflow, os.str());
  }
  return K;
}

double ForwardModel::log_dn_map(double log_m, const SolveOptions& options) const {
  return log_m + log_K_of_log_m(log_m, options);
}

double ForwardModel::dn_map(double m, const SolveOptions& options) const {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(Errc::invalid_argument, "the DN map is evaluated at finite m > 0");
  }
  const double lambda = m * solve_K(m, options);
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    std::ostringstream os;
    os << "Lambda(m) not representable at m = " << m;
    throw Error(Errc::overflow, os.str());
  }
  return lambda;
}

double ForwardModel::dn_map_integral_form(double m, const SolveOptions& options) const {
  const double K = solve_K(m, options);
  double total = 0.0;
  for (const auto& piece : pieces_) {
    const double len = piece.right - piece.left;
    total += len * std::pow(piece.gamma, -piece.exponent) * std::pow(K, piece.p * piece.exponent);
  }
  if (!std::isfinite(total)) throw Error(Errc::overflow, "integral form not representable");
  return total;
}

Solution ForwardModel::solve_bvp(double A, double B, const SolveOptions& options) const {
  if (!std::isfinite(A) || !std::isfinite(B) || A > B) {
    throw Error(Errc::invalid_argument, "boundary data must be finite with A <= B");
  }
  std::vector<double> knots;
  std::vector<double> values;
  knots.push_back(interval().a());
  values.push_back(A);
  const double m = B - A;
  if (m == 0.0) {
    knots.push_back(interval().b());
    values.push_back(A);
    return Solution(A, B, 0.0, std::move(knots), std::move(values));
  }
  const double K = solve_K(m, options);
  double u = A;
  for (const auto& piece : pieces_) {
    u += (piece.right - piece.left) * power_ratio(K, piece.gamma, piece.exponent);
    knots.push_back(piece.right);
    values.push_back(u);
  }
  return Solution(A, B, K, std::move(knots), std::move(values));
}

}  // namespace varexp
