#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "varexp/moments.hpp"
#include "varexp/profiles.hpp"

namespace varexp {

/// A level of a step distribution: the measure carried at `value`.
struct Level {
  double value;
  double mass;

  friend bool operator==(const Level&, const Level&) = default;
};

/// Right-continuous non-increasing t -> mu(t) = sum of masses with value > t.
///
/// Exact profiles and reconstructions share this step form: a polynomial
/// reconstruction is discretised on a fine grid before it is stored.
class DistributionFn {
 public:
  DistributionFn() = default;

  /// Levels with equal values are merged; non-positive masses are dropped.
  /// Masses are accumulated in a canonical order so the result does not
  /// depend on the order of the input.
  explicit DistributionFn(std::vector<Level> levels, double support = 0.0);

  double operator()(double t) const;

  /// Levels in decreasing order of value.
  const std::vector<Level>& levels() const noexcept { return levels_; }

  /// mu(0), the measure of {f > 0}.
  double total() const noexcept { return total_; }

  /// M with mu(t) = 0 for t >= M.
  double support() const noexcept { return support_; }

  /// Level values in increasing order; mu jumps exactly there.
  std::vector<double> jumps() const;

  /// Polynomial coefficients when the function came from a Legendre
  /// reconstruction; diagnostic only.
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  void set_coefficients(std::vector<double> c) { coefficients_ = std::move(c); }

  friend bool operator==(const DistributionFn& x, const DistributionFn& y) {
    return x.levels_ == y.levels_;
  }

 private:
  std::vector<Level> levels_;
  std::vector<double> cumulative_;  // cumulative_[k] = mass of the first k levels
  double total_ = 0.0;
  double support_ = 0.0;
  std::vector<double> coefficients_;
};

/// E -> integral over E of gamma^{-1/(p-1)} dx.
class WeightedMeasure {
 public:
  WeightedMeasure(StepProfile gamma, StepProfile p);

  const StepProfile& gamma() const noexcept { return gamma_; }
  const StepProfile& p() const noexcept { return p_; }

  double density(double gamma, double p) const { return std::pow(gamma, -1.0 / (p - 1.0)); }
  double total() const;

 private:
  StepProfile gamma_;
  StepProfile p_;
};

/// Exact step distribution of a profile, Lebesgue or weighted.
DistributionFn distribution_of(const StepProfile& f);
DistributionFn distribution_of(const StepProfile& f, const WeightedMeasure& measure);

enum class ReconstructionMethod { atomic, legendre };

std::string_view to_string(ReconstructionMethod method) noexcept;
ReconstructionMethod method_from_string(std::string_view name);

struct ReconstructionOptions {
  ReconstructionMethod method = ReconstructionMethod::atomic;
  int basis_size = 12;
  double regularization = 0.0;
  /// Legendre: number of cells used to discretise the polynomial.
  int grid = 2000;
  /// Atomic: relative moment residual accepted for the smallest atom count.
  double atom_tol = 1e-7;
};

/// Orthonormal shifted Legendre expansion of mu on [0, M].
struct LegendreExpansion {
  double M = 1.0;
  std::vector<double> alpha;

  double operator()(double t) const;
  /// integral over [0, M] of t^{n-1} times the expansion, n >= 1.
  double moment(int n) const;
};

LegendreExpansion legendre_expansion(const DistributionMoments& d, int basis_size,
                                     double regularization);

/// Recovers mu from d_n = integral of t^{n-1} mu(t) dt on [0, M].
DistributionFn reconstruct_distribution(const DistributionMoments& d,
                                        const ReconstructionOptions& options = {});

/// f*(x) = inf{t >= 0 : mu(t) <= x} on [0, total], and r = 1 + 1/f*.
class Rearrangement {
 public:
  explicit Rearrangement(const DistributionFn& mu);

  double total() const noexcept { return total_; }
  /// Right endpoints W_k of the pieces of f*, cumulative masses.
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  /// Values of f* on the pieces, non-increasing.
  const std::vector<double>& values() const noexcept { return values_; }

  double f_star(double x) const;
  /// 1 + 1/f*(x); nullopt where f*(x) = 0 (x >= total).
  std::optional<double> r(double x) const;

  /// f* as a profile on [0, total]. Requires total > 0.
  StepProfile as_profile() const;
  /// r as a non-decreasing profile on [0, total].
  StepProfile r_profile() const;

 private:
  double total_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

Rearrangement decreasing_rearrangement(const DistributionFn& mu);

struct EquimeasurabilityReport {
  bool equal = false;
  double max_gap = 0.0;
  double at = 0.0;  ///< a t where the gap is attained
};

/// sup_t |mu1(t) - mu2(t)| over the union of jump points and 0.
EquimeasurabilityReport equimeasurable(const DistributionFn& mu1, const DistributionFn& mu2,
                                       double tol);

/// Strictly monotone continuous maps used with compose_monotone.
struct MonotoneMap {
  enum class Kind { affine, power, reciprocal_shift, exp, log };
  Kind kind = Kind::affine;
  double a = 1.0;
  double b = 0.0;

  static MonotoneMap identity() { return {Kind::affine, 1.0, 0.0}; }
  static MonotoneMap affine(double a, double b) { return {Kind::affine, a, b}; }
  /// t^a, t > 0.
  static MonotoneMap power(double a) { return {Kind::power, a, 0.0}; }
  /// 1 + 1/t, t > 0.
  static MonotoneMap reciprocal_shift() { return {Kind::reciprocal_shift, 1.0, 0.0}; }
  /// exp(a t).
  static MonotoneMap exp(double a) { return {Kind::exp, a, 0.0}; }
  /// log(t) + b, for t with log(t) + b > 0.
  static MonotoneMap log(double b) { return {Kind::log, 1.0, b}; }

  bool in_domain(double t) const;
  double operator()(double t) const;
  bool decreasing() const;
};

/// h o f piecewise. Throws DomainViolation if a value leaves the domain of
/// h or maps outside (0, inf).
StepProfile compose_monotone(const StepProfile& profile, const MonotoneMap& h);

}  // namespace varexp
