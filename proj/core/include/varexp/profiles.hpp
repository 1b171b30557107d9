#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace varexp {

/// Bounded interval [a, b] with a < b.
class Interval {
 public:
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

/// Piecewise-constant positive function on an interval.
///
/// Piece j covers [x_j, x_{j+1}) where x_0 = a, x_k = b and x_1..x_{k-1} are
/// the interior breaks. Evaluation is right-continuous at the breaks; the
/// last piece also owns the right endpoint b.
class StepProfile {
 public:
  StepProfile(Interval interval, std::vector<double> breaks, std::vector<double> values);

  static StepProfile constant(Interval interval, double value);

  const Interval& interval() const noexcept { return interval_; }
  std::span<const double> breaks() const noexcept { return breaks_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t pieces() const noexcept { return values_.size(); }

  double piece_left(std::size_t j) const;
  double piece_right(std::size_t j) const;
  double piece_length(std::size_t j) const { return piece_right(j) - piece_left(j); }

  /// Index of the piece covering x (right-continuous). x must lie in [a, b].
  std::size_t piece_at(double x) const;
  double operator()(double x) const { return values_[piece_at(x)]; }

  double min_value() const noexcept;
  double max_value() const noexcept;
  bool is_constant() const noexcept;

  /// Pointwise image under fn, same breaks. Throws if a value is not > 0.
  StepProfile map(const std::function<double(double)>& fn) const;

  /// Same values on a permuted piece order (piece j of the result is piece
  /// order[j] of this profile, lengths travel with their values).
  StepProfile permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const StepProfile&, const StepProfile&) = default;

 private:
  Interval interval_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// A piece of the common refinement of two profiles on the same interval.
struct Segment {
  double left;
  double right;
  double first;   ///< value of the first profile
  double second;  ///< value of the second profile

  double length() const noexcept { return right - left; }
};

std::vector<Segment> common_refinement(const StepProfile& first, const StepProfile& second);

/// Converts a smooth (or any evaluable) function into a StepProfile by
/// midpoint sampling on `pieces` equal cells.
StepProfile sample_profile(const std::function<double(double)>& fn, Interval interval,
                           std::size_t pieces = 4096);

/// The eps of the standing assumptions: eps < gamma < 1/eps and
/// 1 + eps < p < 1/eps on every piece.
struct StandingAssumptions {
  double eps;
};

/// Checks the standing assumptions for (p, gamma). Throws BoundsViolation
/// naming the offending piece and bound.
StandingAssumptions validate(const StepProfile& p, const StepProfile& gamma, double eps);

/// Largest eps for which the strict bounds hold, halved so they hold strictly.
double admissible_eps(const StepProfile& p, const StepProfile& gamma);

struct ExponentStats {
  double p_plus;
  double p_minus;
  double f_sup;  ///< 1 / (p_minus - 1), the support bound of 1/(p-1)
};

ExponentStats stats(const StepProfile& p);

/// f = 1/(p - 1) piecewise. Throws DegenerateExponent if some value is <= 1.
StepProfile f_of_p(const StepProfile& p);

}  // namespace varexp
