#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace varexp {

/// Failure categories raised by the library. Each maps onto one of the
/// documented error names of the public operations.
enum class Errc {
  invalid_argument,
  bounds_violation,
  degenerate_exponent,
  overflow,
  no_convergence,
  non_monotone_table,
  out_of_range,
  ill_conditioned,
  not_converged,
  insufficient_moments,
  ill_posed,
  domain_violation,
  bad_bounds,
  parse_error,
};

std::string_view to_string(Errc code) noexcept;

/// True for failures of a numerical procedure (as opposed to bad input).
bool is_numerical(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace varexp
