#pragma once

#include <functional>
#include <vector>

#include "varexp/profiles.hpp"
#include "varexp/rearrange.hpp"

// Brute-force reference computations. Nothing here calls into the forward,
// moments or rearrange code paths; results are compared against them.
namespace varexp::reference {

struct BruteForceConfig {
  /// Midpoint samples on [a, b]; at least 1000.
  std::size_t resolution = 1000000;
};

/// Lambda = gamma m^p / (b - a)^{p - 1} for constant p and gamma.
double dn_closed_form(double p, double gamma, const Interval& interval, double m);

/// sum_j len_j gamma_j^{-f_j} f_j^n with f = 1/(p - 1), over the merged
/// breaks of p and gamma.
double moments_exact(const StepProfile& p, const StepProfile& gamma, int n);

/// Empirical distribution of f from midpoint samples, each of mass h.
DistributionFn distribution_dense(const std::function<double(double)>& f, const Interval& interval,
                                  const BruteForceConfig& config = {});

/// Sorted midpoint samples of f: the increasing rearrangement of f on the
/// grid x_i = a + (i + 1/2) h.
std::vector<double> increasing_rearrangement_dense(const std::function<double(double)>& f,
                                                   const Interval& interval,
                                                   const BruteForceConfig& config = {});

/// u(x) for boundary data A <= B by midpoint quadrature of
/// (K/gamma)^{1/(p-1)}, with K found by bisection on the quadrature of m(K).
double u_dense(const StepProfile& p, const StepProfile& gamma, double A, double B, double x,
               const BruteForceConfig& config = {});

}  // namespace varexp::reference
