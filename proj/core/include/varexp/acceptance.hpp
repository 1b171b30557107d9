#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace varexp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteriaCount = 10;
inline constexpr std::uint64_t kAcceptanceSeed = 20240917;

/// Runs criterion `id` (1..10) on a deterministic random corpus.
CriterionResult run_criterion(int id, std::uint64_t seed = kAcceptanceSeed);

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kAcceptanceSeed);

/// "PASS  3  name  detail  (0.12 s)"
std::string format_result(const CriterionResult& r);

}  // namespace varexp
