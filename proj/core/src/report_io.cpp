#include "varexp/report_io.hpp"

#include <cmath>
#include <set>

#include "varexp/error.hpp"
#include "varexp/pipeline.hpp"

namespace varexp {

using nlohmann::json;

namespace {

// NaN and infinities have no JSON spelling; write null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string side_name(ProbeSide s) { return s == ProbeSide::small_m ? "small_m" : "large_m"; }
std::string side_name(Extremum s) { return s == Extremum::min ? "min" : "max"; }

template <class T>
void read(const json& doc, const char* key, T& into) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("config key \"") + key + "\": " + e.what());
  }
}

void reject_unknown(const json& doc, std::initializer_list<const char*> keys, const char* where) {
  if (!doc.is_object()) throw Error(Errc::parse_error, std::string(where) + " must be an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [k, v] : doc.items()) {
    if (!known.count(k)) {
      throw Error(Errc::parse_error, std::string("unknown key \"") + k + "\" in " + where);
    }
  }
}

json model_doc(const json& value) {
  return value.is_string() ? read_json_file(value.get<std::string>()) : value;
}

}  // namespace

json to_json(const SlopeEstimate& e) {
  return {{"exponent", number(e.exponent)},
          {"intercept", number(e.intercept)},
          {"residual", number(e.residual)},
          {"side", side_name(e.side)},
          {"converged", e.converged},
          {"m_grid", e.m_grid}};
}

json to_json(const LevelSetIntegral& l) {
  return {{"side", side_name(l.side)},
          {"value", number(l.value)},
          {"limit_value", number(l.limit_value)},
          {"converged", l.converged},
          {"probes", l.probes},
          {"scaled", l.scaled}};
}

json to_json(const ExtremesEstimate& x) {
  return {{"p_plus", to_json(x.p_plus)},
          {"p_minus", to_json(x.p_minus)},
          {"level_set_max", to_json(x.level_max)},
          {"level_set_min", to_json(x.level_min)}};
}

json to_json(const MomentSequence& m) {
  json doc{{"N", m.N},
           {"c", m.c},
           {"weighted", m.weighted},
           {"scheme", std::string(to_string(m.scheme))},
           {"h_used", m.h_used},
           {"condition_estimate", number(m.condition_estimate)},
           {"condition", m.condition}};
  doc["truncated_from"] = m.truncated_from ? json(*m.truncated_from) : json(nullptr);
  return doc;
}

json to_json(const DistributionMoments& d) {
  return {{"d", d.d}, {"M", d.M}, {"total", d.total()}, {"weighted", d.weighted}};
}

json to_json(const DistributionFn& mu) {
  json levels = json::array();
  for (const auto& l : mu.levels()) levels.push_back({{"value", l.value}, {"mass", l.mass}});
  json doc{{"total", mu.total()}, {"support", mu.support()}, {"levels", levels}};
  if (!mu.coefficients().empty()) doc["legendre_coefficients"] = mu.coefficients();
  return doc;
}

DistributionMoments distribution_moments_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("M")) {
    throw Error(Errc::parse_error, "moments document needs \"M\" and \"d\" or \"c\"");
  }
  DistributionMoments out;
  try {
    out.M = doc.at("M").get<double>();
    if (doc.contains("d")) {
      out.d = doc.at("d").get<std::vector<double>>();
    } else if (doc.contains("c")) {
      const auto c = doc.at("c").get<std::vector<double>>();
      for (std::size_t n = 0; n < c.size(); ++n) out.d.push_back(n == 0 ? c[0] : c[n] / n);
    } else {
      throw Error(Errc::parse_error, "moments document needs \"d\" or \"c\"");
    }
    if (doc.contains("weighted")) out.weighted = doc.at("weighted").get<bool>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("moments document: ") + e.what());
  }
  return out;
}

json to_json(const ExperimentConfig& c) {
  json doc;
  if (c.model) doc["model"] = to_json(*c.model);
  doc["table"] = c.table ? json(*c.table) : json(nullptr);
  doc["table_gamma"] = c.table_gamma;
  doc["stage"] = std::string(to_string(c.stage));
  doc["solve"] = {{"tol", c.solve.tol}, {"max_iterations", c.solve.max_iterations}};
  doc["m_grid"] = {{"start", c.m_grid.start},
                   {"stop", c.m_grid.stop},
                   {"count", c.m_grid.count},
                   {"spacing", c.m_grid.log ? "log" : "lin"}};
  doc["asymptotics"] = {{"depth", c.asymptotics.depth},
                        {"decades", c.asymptotics.decades},
                        {"points_per_decade", c.asymptotics.points_per_decade},
                        {"level_max_decades", c.asymptotics.level_set.max_decades},
                        {"level_rel_tol", c.asymptotics.level_set.rel_tol}};
  doc["moments"] = c.moments;
  doc["differentiation"] = {{"scheme", std::string(to_string(c.moment_options.scheme))},
                            {"degree", c.moment_options.degree},
                            {"window", c.moment_options.window},
                            {"scaled_window", c.moment_options.scaled_window},
                            {"max_n", c.moment_options.max_n},
                            {"condition_limit", c.moment_options.condition_limit},
                            {"richardson_levels", c.moment_options.richardson_levels}};
  doc["reconstruction"] = {{"method", std::string(to_string(c.reconstruction.method))},
                           {"basis", c.reconstruction.basis_size},
                           {"ridge", c.reconstruction.regularization},
                           {"grid", c.reconstruction.grid},
                           {"atom_tol", c.reconstruction.atom_tol}};
  doc["r_points"] = c.r_points;
  doc["jump_band"] = c.jump_band;
  doc["seed"] = c.seed;
  doc["out"] = c.out ? json(*c.out) : json(nullptr);
  return doc;
}

ExperimentConfig config_from_json(const json& doc, ExperimentConfig c) {
  reject_unknown(doc,
                 {"model", "profile", "table", "table_gamma", "stage", "solve", "m_grid",
                  "asymptotics", "moments", "differentiation", "reconstruction", "r_points",
                  "jump_band", "seed", "out"},
                 "config");
  try {
    if (doc.contains("model") && !doc.at("model").is_null()) {
      c.model = model_from_json(model_doc(doc.at("model")));
    }
    if (doc.contains("profile") && !doc.at("profile").is_null()) {
      c.model = model_from_json(model_doc(doc.at("profile")));
    }
    if (doc.contains("table") && !doc.at("table").is_null()) c.table = doc.at("table").get<std::string>();
    read(doc, "table_gamma", c.table_gamma);
    if (doc.contains("stage")) c.stage = stage_from_string(doc.at("stage").get<std::string>());
    if (doc.contains("solve")) {
      const auto& s = doc.at("solve");
      reject_unknown(s, {"tol", "max_iterations"}, "solve");
      read(s, "tol", c.solve.tol);
      read(s, "max_iterations", c.solve.max_iterations);
    }
    if (doc.contains("m_grid")) {
      const auto& g = doc.at("m_grid");
      if (g.is_string()) {
        c.m_grid = parse_grid(g.get<std::string>());
      } else {
        reject_unknown(g, {"start", "stop", "count", "spacing"}, "m_grid");
        read(g, "start", c.m_grid.start);
        read(g, "stop", c.m_grid.stop);
        read(g, "count", c.m_grid.count);
        if (g.contains("spacing")) c.m_grid.log = g.at("spacing").get<std::string>() != "lin";
      }
    }
    if (doc.contains("asymptotics")) {
      const auto& a = doc.at("asymptotics");
      reject_unknown(a, {"depth", "decades", "points_per_decade", "level_max_decades", "level_rel_tol"},
                     "asymptotics");
      read(a, "depth", c.asymptotics.depth);
      read(a, "decades", c.asymptotics.decades);
      read(a, "points_per_decade", c.asymptotics.points_per_decade);
      read(a, "level_max_decades", c.asymptotics.level_set.max_decades);
      read(a, "level_rel_tol", c.asymptotics.level_set.rel_tol);
    }
    read(doc, "moments", c.moments);
    if (doc.contains("differentiation")) {
      const auto& d = doc.at("differentiation");
      reject_unknown(d, {"scheme", "degree", "window", "scaled_window", "max_n", "condition_limit",
                         "richardson_levels"},
                     "differentiation");
      if (d.contains("scheme")) c.moment_options.scheme = scheme_from_string(d.at("scheme").get<std::string>());
      read(d, "degree", c.moment_options.degree);
      read(d, "window", c.moment_options.window);
      read(d, "scaled_window", c.moment_options.scaled_window);
      read(d, "max_n", c.moment_options.max_n);
      read(d, "condition_limit", c.moment_options.condition_limit);
      read(d, "richardson_levels", c.moment_options.richardson_levels);
    }
    if (doc.contains("reconstruction")) {
      const auto& r = doc.at("reconstruction");
      reject_unknown(r, {"method", "basis", "ridge", "grid", "atom_tol"}, "reconstruction");
      if (r.contains("method")) c.reconstruction.method = method_from_string(r.at("method").get<std::string>());
      read(r, "basis", c.reconstruction.basis_size);
      read(r, "ridge", c.reconstruction.regularization);
      read(r, "grid", c.reconstruction.grid);
      read(r, "atom_tol", c.reconstruction.atom_tol);
    }
    read(doc, "r_points", c.r_points);
    read(doc, "jump_band", c.jump_band);
    read(doc, "seed", c.seed);
    if (doc.contains("out") && !doc.at("out").is_null()) c.out = doc.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const ReconstructionReport& r) {
  json doc;
  doc["status"] = r.status;
  doc["exit_code"] = r.exit_code;
  if (!r.failed_stage.empty()) doc["failed_stage"] = r.failed_stage;
  if (!r.message.empty()) doc["message"] = r.message;
  doc["weighted_only"] = r.weighted_only;
  if (r.extremes) {
    doc["asymptotics"] = to_json(*r.extremes);
    doc["support_bound"] = number(r.support_bound);
  }
  if (r.moments) doc["moments"] = to_json(*r.moments);
  if (r.distribution_moments) doc["distribution_moments"] = to_json(*r.distribution_moments);
  if (r.distribution) doc["distribution"] = to_json(*r.distribution);
  if (r.rearrangement) {
    doc["rearrangement"] = {{"total", r.rearrangement->total()},
                            {"breaks", r.rearrangement->breaks()},
                            {"f_star", r.rearrangement->values()}};
    json xs = json::array();
    json rs = json::array();
    for (const auto& [x, v] : r.r_samples) {
      xs.push_back(x);
      rs.push_back(v);
    }
    doc["r_samples"] = {{"x", xs}, {"r", rs}};
  }
  if (r.truth) {
    doc["truth"] = {{"distribution_sup_gap", number(r.truth->distribution_sup_gap)},
                    {"distribution_sup_gap_full", number(r.truth->distribution_sup_gap_full)},
                    {"r_l1", number(r.truth->r_l1)},
                    {"p_plus_error", number(r.truth->p_plus_error)},
                    {"p_minus_error", number(r.truth->p_minus_error)}};
  }
  doc["seconds"] = r.seconds;
  return doc;
}

}  // namespace varexp
