#include "varexp/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    std::ostringstream os;
    os << "interval [" << a << ", " << b << "] must satisfy -inf < a < b < inf";
    throw Error(Errc::invalid_argument, os.str());
  }
}

StepProfile::StepProfile(Interval interval, std::vector<double> breaks, std::vector<double> values)
    : interval_(interval), breaks_(std::move(breaks)), values_(std::move(values)) {
  if (values_.size() != breaks_.size() + 1) {
    throw Error(Errc::invalid_argument, "a step profile needs exactly one more value than breaks");
  }
  double prev = interval_.a();
  for (double x : breaks_) {
    if (!(x > prev) || !(x < interval_.b())) {
      throw Error(Errc::invalid_argument,
                  "breaks must be strictly increasing and inside the open interval");
    }
    prev = x;
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j]) || !(values_[j] > 0.0)) {
      std::ostringstream os;
      os << "piece " << j << " has value " << values_[j] << "; values must be finite and > 0";
      throw Error(Errc::invalid_argument, os.str());
    }
  }
}

StepProfile StepProfile::constant(Interval interval, double value) {
  return StepProfile(interval, {}, {value});
}

double StepProfile::piece_left(std::size_t j) const {
  return j == 0 ? interval_.a() : breaks_.at(j - 1);
}

double StepProfile::piece_right(std::size_t j) const {
  return j + 1 == values_.size() ? interval_.b() : breaks_.at(j);
}

std::size_t StepProfile::piece_at(double x) const {
  if (!(x >= interval_.a() && x <= interval_.b())) {
    std::ostringstream os;
    os << "x = " << x << " outside [" << interval_.a() << ", " << interval_.b() << "]";
    throw Error(Errc::out_of_range, os.str());
  }
  // First break strictly greater than x: the piece index equals the number
  // of breaks <= x, which gives right-continuity.
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return static_cast<std::size_t>(it - breaks_.begin());
}

double StepProfile::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

double StepProfile::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

bool StepProfile::is_constant() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [&](double v) { return v == values_.front(); });
}

StepProfile StepProfile::map(const std::function<double(double)>& fn) const {
  std::vector<double> mapped;
  mapped.reserve(values_.size());
  for (double v : values_) mapped.push_back(fn(v));
  return StepProfile(interval_, breaks_, std::move(mapped));
}

StepProfile StepProfile::permuted(std::span<const std::size_t> order) const {
  if (order.size() != values_.size()) {
    throw Error(Errc::invalid_argument, "permutation size does not match piece count");
  }
  std::vector<bool> seen(values_.size(), false);
  std::vector<double> breaks;
  std::vector<double> values;
  double x = interval_.a();
  for (std::size_t j = 0; j < order.size(); ++j) {
    std::size_t src = order[j];
    if (src >= values_.size() || seen[src]) {
      throw Error(Errc::invalid_argument, "not a permutation of the piece indices");
    }
    seen[src] = true;
    values.push_back(values_[src]);
    x += piece_length(src);
    if (j + 1 < order.size()) breaks.push_back(x);
  }
  return StepProfile(interval_, std::move(breaks), std::move(values));
}

std::vector<Segment> common_refinement(const StepProfile& first, const StepProfile& second) {
  if (!(first.interval() == second.interval())) {
    throw Error(Errc::invalid_argument, "profiles must share the same interval");
  }
  std::vector<Segment> out;
  out.reserve(first.pieces() + second.pieces());
  std::size_t i = 0;
  std::size_t j = 0;
  double left = first.interval().a();
  while (i < first.pieces() && j < second.pieces()) {
    double r1 = first.piece_right(i);
    double r2 = second.piece_right(j);
    double right = std::min(r1, r2);
    out.push_back({left, right, first.values()[i], second.values()[j]});
    left = right;
    if (r1 == right) ++i;
    if (r2 == right) ++j;
  }
  return out;
}

StepProfile sample_profile(const std::function<double(double)>& fn, Interval interval,
                           std::size_t pieces) {
  if (pieces == 0) throw Error(Errc::invalid_argument, "sampling needs at least one piece");
  const double h = interval.length() / static_cast<double>(pieces);
  std::vector<double> breaks;
  std::vector<double> values;
  breaks.reserve(pieces - 1);
  values.reserve(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    values.push_back(fn(interval.a() + (static_cast<double>(k) + 0.5) * h));
    if (k + 1 < pieces) breaks.push_back(interval.a() + static_cast<double>(k + 1) * h);
  }
  return StepProfile(interval, std::move(breaks), std::move(values));
}

StandingAssumptions validate(const StepProfile& p, const StepProfile& gamma, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(Errc::invalid_argument, "eps must lie in (0, 1)");
  }
  if (!(p.interval() == gamma.interval())) {
    throw Error(Errc::invalid_argument, "p and gamma must share the same interval");
  }
  auto fail = [](const char* name, std::size_t piece, double value, const char* bound,
                 double limit) {
    std::ostringstream os;
    os << name << " piece " << piece << ": value " << value << " violates " << bound << " "
       << limit;
    throw Error(Errc::bounds_violation, os.str());
  };
  for (std::size_t j = 0; j < p.pieces(); ++j) {
    double v = p.values()[j];
    if (!(v > 1.0 + eps)) fail("p", j, v, "p >", 1.0 + eps);
    if (!(v < 1.0 / eps)) fail("p", j, v, "p <", 1.0 / eps);
  }
  for (std::size_t j = 0; j < gamma.pieces(); ++j) {
    double v = gamma.values()[j];
    if (!(v > eps)) fail("gamma", j, v, "gamma >", eps);
    if (!(v < 1.0 / eps)) fail("gamma", j, v, "gamma <", 1.0 / eps);
  }
  return StandingAssumptions{eps};
}

double admissible_eps(const StepProfile& p, const StepProfile& gamma) {
  double sup = 1.0;
  for (double v : p.values()) sup = std::min({sup, v - 1.0, 1.0 / v});
  for (double v : gamma.values()) sup = std::min({sup, v, 1.0 / v});
  if (!(sup > 0.0)) {
    throw Error(Errc::bounds_violation, "no eps > 0 satisfies the standing assumptions");
  }
  return 0.5 * sup;
}

ExponentStats stats(const StepProfile& p) {
  const double lo = p.min_value();
  const double hi = p.max_value();
  if (!(lo > 1.0)) {
    throw Error(Errc::degenerate_exponent, "essential infimum of p must exceed 1");
  }
  return ExponentStats{hi, lo, 1.0 / (lo - 1.0)};
}

StepProfile f_of_p(const StepProfile& p) {
  for (std::size_t j = 0; j < p.pieces(); ++j) {
    if (!(p.values()[j] > 1.0)) {
      std::ostringstream os;
      os << "piece " << j << " has p = " << p.values()[j] << " <= 1";
      throw Error(Errc::degenerate_exponent, os.str());
    }
  }
  return p.map([](double v) { return 1.0 / (v - 1.0); });
}

}  // namespace varexp
