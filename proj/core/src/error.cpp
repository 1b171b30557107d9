#include "varexp/error.hpp"

namespace varexp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::bounds_violation: return "BoundsViolation";
    case Errc::degenerate_exponent: return "DegenerateExponent";
    case Errc::overflow: return "Overflow";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::non_monotone_table: return "NonMonotoneTable";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::ill_conditioned: return "IllConditioned";
    case Errc::not_converged: return "NotConverged";
    case Errc::insufficient_moments: return "InsufficientMoments";
    case Errc::ill_posed: return "IllPosed";
    case Errc::domain_violation: return "DomainViolation";
    case Errc::bad_bounds: return "BadBounds";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

bool is_numerical(Errc code) noexcept {
  switch (code) {
    case Errc::overflow:
    case Errc::no_convergence:
    case Errc::ill_conditioned:
    case Errc::not_converged:
    case Errc::ill_posed:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace varexp
