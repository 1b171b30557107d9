#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "varexp/dn_oracle.hpp"

namespace varexp {

enum class DifferentiationScheme { chebyshev, finite_difference };

std::string_view to_string(DifferentiationScheme scheme) noexcept;
DifferentiationScheme scheme_from_string(std::string_view name);

struct MomentOptions {
  DifferentiationScheme scheme = DifferentiationScheme::chebyshev;
  /// Chebyshev degree; the fit uses 2 * degree nodes.
  int degree = 36;
  /// Half width s0 of the window [-s0, s0] in s = log K. When 0 it is taken
  /// as scaled_window / M, or 0.5 when no support bound M is known.
  double window = 0.0;
  double scaled_window = 10.0;
  int max_n = 24;
  double condition_limit = 1e12;
  /// Finite differences: halvings of the step used for Richardson.
  int richardson_levels = 4;
};

/// c_n = d^n/ds^n g(s) at s = 0, where g(s) = m(e^s).
struct MomentSequence {
  std::vector<double> c;
  int N = 0;
  bool weighted = true;
  DifferentiationScheme scheme = DifferentiationScheme::chebyshev;
  double h_used = 0.0;             ///< window s0 (chebyshev) or final step (fd)
  double condition_estimate = 0.0; ///< worst amplification among the kept c_n
  std::vector<double> condition;   ///< per-n amplification factor
  std::optional<int> truncated_from;
};

/// m with K_m = e^s, found by bisection on log Lambda(m) - log m = s using
/// only DN-map queries.
double g_of_s(const DnOracle& oracle, double s, double tol = 1e-14);

/// Extracts c_0..c_N. support_bound is M = 1/(p- - 1) when known; it sets
/// the default window. Orders whose amplification exceeds the condition
/// limit are dropped and reported via truncated_from.
MomentSequence extract_moments(const DnOracle& oracle, int N, const MomentOptions& options = {},
                               std::optional<double> support_bound = std::nullopt,
                               bool weighted = true);

/// d[0] holds c_0 (the total weighted measure), d[n] = c_n / n for n >= 1.
struct DistributionMoments {
  std::vector<double> d;
  double M = 0.0;
  bool weighted = true;

  int N() const noexcept { return static_cast<int>(d.size()) - 1; }
  double total() const noexcept { return d.empty() ? 0.0 : d[0]; }
};

DistributionMoments to_distribution_moments(const MomentSequence& c, double M);

}  // namespace varexp
