#pragma once

#include <optional>
#include <vector>

#include "varexp/profiles.hpp"

namespace varexp {

struct SolveOptions {
  /// Residual target |m(K) - m| <= tol * max(1, m).
  double tol = 1e-12;
  int max_iterations = 200;
};

/// Solution of -(gamma |u'|^{p-2} u')' = 0 with u(a) = A, u(b) = B, A <= B.
///
/// u is piecewise linear: on each piece of the common refinement of p and
/// gamma the slope is (K / gamma)^{1/(p-1)}.
class Solution {
 public:
  Solution(double A, double B, double K, std::vector<double> knots, std::vector<double> values);

  double A() const noexcept { return A_; }
  double B() const noexcept { return B_; }
  /// Flux constant; 0 for the constant solution A == B.
  double K() const noexcept { return K_; }

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(double x) const;

 private:
  double A_;
  double B_;
  double K_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// The forward map of the one dimensional variable exponent equation.
///
/// For m = B - A > 0 the flux constant K_m solves
///   m = sum_j len_j (K / gamma_j)^{1/(p_j - 1)}
/// and the Dirichlet-to-Neumann map is Lambda(m) = m K_m.
class ForwardModel {
 public:
  /// Validates with the largest admissible eps (see admissible_eps).
  ForwardModel(StepProfile p, StepProfile gamma);
  ForwardModel(StepProfile p, StepProfile gamma, double eps);

  const StepProfile& p() const noexcept { return p_; }
  const StepProfile& gamma() const noexcept { return gamma_; }
  const StandingAssumptions& assumptions() const noexcept { return assumptions_; }
  const Interval& interval() const noexcept { return p_.interval(); }

  /// m(K) as the exact piecewise sum. Throws Overflow when not representable.
  double m_of_K(double K) const;

  /// log m(e^y) evaluated in extended precision (log-sum-exp over pieces).
  long double log_m_of_log_K(long double y) const;

  /// K_m for m > 0.
  double solve_K(double m, const SolveOptions& options = {}) const;

  /// log K_m as a function of log m; never overflows.
  double log_K_of_log_m(double log_m, const SolveOptions& options = {}) const;

  /// Lambda(m) = m K_m.
  double dn_map(double m, const SolveOptions& options = {}) const;

  /// log Lambda(e^x).
  double log_dn_map(double log_m, const SolveOptions& options = {}) const;

  /// Lambda(m) evaluated as int gamma^{-1/(p-1)} K^{p/(p-1)} dx.
  double dn_map_integral_form(double m, const SolveOptions& options = {}) const;

  Solution solve_bvp(double A, double B, const SolveOptions& options = {}) const;

 private:
  struct Piece {
    double left;
    double right;
    double exponent;      // 1 / (p - 1)
    double p;
    double gamma;
    long double log_weight;  // log(len) - exponent * log(gamma)
  };

  StepProfile p_;
  StepProfile gamma_;
  StandingAssumptions assumptions_;
  std::vector<Piece> pieces_;
  double exponent_min_ = 0.0;
  double exponent_max_ = 0.0;

  void build_pieces();
};

}  // namespace varexp
