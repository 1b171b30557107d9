#pragma once

#include <nlohmann/json.hpp>

#include "varexp/asymptotics.hpp"
#include "varexp/moments.hpp"
#include "varexp/rearrange.hpp"

namespace varexp {

nlohmann::json to_json(const SlopeEstimate& estimate);
nlohmann::json to_json(const LevelSetIntegral& level);
nlohmann::json to_json(const ExtremesEstimate& extremes);
nlohmann::json to_json(const MomentSequence& moments);
nlohmann::json to_json(const DistributionMoments& moments);
nlohmann::json to_json(const DistributionFn& mu);

/// Reads {"d": [...], "M": ...} or {"c": [...], "M": ...}; the latter is
/// converted with d_n = c_n / n.
DistributionMoments distribution_moments_from_json(const nlohmann::json& doc);

}  // namespace varexp
