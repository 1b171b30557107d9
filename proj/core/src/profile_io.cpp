#include "varexp/profile_io.hpp"

#include <fstream>

#include "varexp/error.hpp"

namespace varexp {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(Errc::parse_error, std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> require_numbers(const json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::parse_error, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(require_number(x, what));
  return out;
}

}  // namespace

StepProfile profile_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("interval")) {
    throw Error(Errc::parse_error, "profile needs an \"interval\" field");
  }
  auto ends = require_numbers(doc.at("interval"), "interval");
  if (ends.size() != 2) throw Error(Errc::parse_error, "interval must be [a, b]");
  Interval interval(ends[0], ends[1]);
  if (doc.contains("constant")) {
    return StepProfile::constant(interval, require_number(doc.at("constant"), "constant"));
  }
  if (!doc.contains("pieces")) {
    throw Error(Errc::parse_error, "profile needs \"pieces\" or \"constant\"");
  }
  const auto& pieces = doc.at("pieces");
  if (!pieces.is_object() || !pieces.contains("values")) {
    throw Error(Errc::parse_error, "\"pieces\" needs \"breaks\" and \"values\"");
  }
  auto breaks = pieces.contains("breaks") ? require_numbers(pieces.at("breaks"), "breaks")
                                          : std::vector<double>{};
  return StepProfile(interval, std::move(breaks), require_numbers(pieces.at("values"), "values"));
}

json to_json(const StepProfile& profile) {
  json doc;
  doc["interval"] = {profile.interval().a(), profile.interval().b()};
  if (profile.pieces() == 1) {
    doc["constant"] = profile.values()[0];
  } else {
    doc["pieces"] = {
        {"breaks", std::vector<double>(profile.breaks().begin(), profile.breaks().end())},
        {"values", std::vector<double>(profile.values().begin(), profile.values().end())}};
  }
  return doc;
}

ModelSpec model_from_json(const json& doc) {
  if (doc.is_object() && doc.contains("p")) {
    StepProfile p = profile_from_json(doc.at("p"));
    StepProfile gamma = doc.contains("gamma") ? profile_from_json(doc.at("gamma"))
                                              : StepProfile::constant(p.interval(), 1.0);
    std::optional<double> eps;
    if (doc.contains("eps")) eps = require_number(doc.at("eps"), "eps");
    return ModelSpec{std::move(p), std::move(gamma), eps};
  }
  StepProfile p = profile_from_json(doc);
  StepProfile gamma = StepProfile::constant(p.interval(), 1.0);
  return ModelSpec{std::move(p), std::move(gamma), std::nullopt};
}

json to_json(const ModelSpec& model) {
  json doc{{"p", to_json(model.p)}, {"gamma", to_json(model.gamma)}};
  if (model.eps) doc["eps"] = *model.eps;
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace varexp
