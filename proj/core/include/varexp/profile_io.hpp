#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "varexp/profiles.hpp"

namespace varexp {

// Profile documents:
//   {"interval":[a,b],"pieces":{"breaks":[x1,...,xk],"values":[v0,...,vk]}}
//   {"interval":[a,b],"constant":v}
StepProfile profile_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const StepProfile& profile);

/// An exponent/conductivity pair as read from a model document.
///
/// A model document is either a bare profile (taken as p, with gamma = 1 on
/// the same interval) or an object {"p": <profile>, "gamma": <profile>,
/// "eps": <optional real>}.
struct ModelSpec {
  StepProfile p;
  StepProfile gamma;
  std::optional<double> eps;
};

ModelSpec model_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ModelSpec& model);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace varexp
