#include "varexp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

double Uniform::operator()() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::forward: return "forward";
    case Stage::asymptotics: return "asymptotics";
    case Stage::moments: return "moments";
    case Stage::rearrange: return "rearrange";
    case Stage::full: return "full";
  }
  return "full";
}

Stage stage_from_string(std::string_view name) {
  for (Stage s : {Stage::forward, Stage::asymptotics, Stage::moments, Stage::rearrange, Stage::full}) {
    if (to_string(s) == name) return s;
  }
  throw Error(Errc::invalid_argument, "unknown stage \"" + std::string(name) + "\"");
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 4) {
    throw Error(Errc::invalid_argument, "grid must read start,stop,count,log|lin: " + text);
  }
  GridSpec g;
  try {
    g.start = std::stod(parts[0]);
    g.stop = std::stod(parts[1]);
    g.count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "grid has a malformed number: " + text);
  }
  if (parts[3] == "log") {
    g.log = true;
  } else if (parts[3] == "lin") {
    g.log = false;
  } else {
    throw Error(Errc::invalid_argument, "grid spacing must be log or lin: " + text);
  }
  make_grid(g);
  return g;
}

std::vector<double> make_grid(const GridSpec& g) {
  if (g.count < 1 || !(g.start > 0.0) || !(g.stop >= g.start) || !std::isfinite(g.stop)) {
    throw Error(Errc::invalid_argument, "grid needs 0 < start <= stop < inf and count >= 1");
  }
  if (g.count > 1 && g.stop == g.start) {
    throw Error(Errc::invalid_argument, "grid with several points needs start < stop");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(g.count));
  if (g.count == 1) return {g.start};
  const double x0 = g.log ? std::log(g.start) : g.start;
  const double x1 = g.log ? std::log(g.stop) : g.stop;
  for (int i = 0; i < g.count; ++i) {
    if (i == 0) {
      out.push_back(g.start);
    } else if (i + 1 == g.count) {
      out.push_back(g.stop);
    } else {
      const double x = x0 + (x1 - x0) * i / (g.count - 1);
      out.push_back(g.log ? std::exp(x) : x);
    }
  }
  return out;
}

StepProfile generate_profile(std::uint64_t seed, int pieces, std::pair<double, double> bounds,
                             Interval interval) {
  const auto [lo, hi] = bounds;
  if (!(lo > 1.0) || !(hi > lo) || !std::isfinite(hi)) {
    std::ostringstream os;
    os << "bounds (" << lo << ", " << hi << ") must satisfy 1 < p_lo < p_hi < inf";
    throw Error(Errc::bad_bounds, os.str());
  }
  if (pieces < 1) throw Error(Errc::invalid_argument, "a profile needs at least one piece");
  Uniform u(seed);
  std::vector<double> values;
  std::vector<double> weights;
  double sum = 0.0;
  for (int j = 0; j < pieces; ++j) {
    values.push_back(u(lo, hi));
    weights.push_back(u(1.0, 4.0));
    sum += weights.back();
  }
  std::vector<double> breaks;
  double acc = 0.0;
  for (int j = 0; j + 1 < pieces; ++j) {
    acc += weights[j];
    breaks.push_back(interval.a() + interval.length() * (acc / sum));
  }
  return StepProfile(interval, std::move(breaks), std::move(values));
}

double compare_dn_maps(const ForwardModel& model1, const ForwardModel& model2,
                       const std::vector<double>& m_grid, const SolveOptions& options) {
  if (!(model1.interval() == model2.interval())) {
    throw Error(Errc::invalid_argument, "models must share the same interval");
  }
  double gap = 0.0;
  for (double m : m_grid) {
    const double l1 = model1.dn_map(m, options);
    const double l2 = model2.dn_map(m, options);
    gap = std::max(gap, std::fabs(l1 - l2) / l1);
  }
  return gap;
}

DistributionFn exponent_distribution(const StepProfile& p) { return distribution_of(f_of_p(p)); }

double distribution_gap(const DistributionFn& mu1, const DistributionFn& mu2,
                        const std::vector<double>& jumps, double band) {
  std::vector<double> ts{0.0};
  for (const auto& l : mu1.levels()) ts.push_back(l.value);
  for (const auto& l : mu2.levels()) ts.push_back(l.value);
  for (double j : jumps) ts.push_back(j + band);
  auto excluded = [&](double t) {
    return std::any_of(jumps.begin(), jumps.end(),
                       [&](double j) { return std::fabs(t - j) < band; });
  };
  double gap = 0.0;
  for (double t : ts) {
    if (t < 0.0 || excluded(t)) continue;
    gap = std::max(gap, std::fabs(mu1(t) - mu2(t)));
  }
  return gap;
}

double r_l1_distance(const StepProfile& r1, const StepProfile& r2, double length) {
  if (!(length > 0.0)) throw Error(Errc::invalid_argument, "length must be positive");
  std::vector<double> xs{0.0, length};
  for (const StepProfile* r : {&r1, &r2}) {
    for (double x : r->breaks()) xs.push_back(x);
    xs.push_back(r->interval().b());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  auto eval = [](const StepProfile& r, double x) {
    return x >= r.interval().b() ? r.values().back() : r(std::max(x, r.interval().a()));
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size() && xs[i] < length; ++i) {
    const double right = std::min(xs[i + 1], length);
    const double mid = 0.5 * (xs[i] + right);
    total += (right - xs[i]) * std::fabs(eval(r1, mid) - eval(r2, mid));
  }
  return total;
}

DnOracle make_oracle(const ExperimentConfig& config) {
  if (config.model) {
    const auto& m = *config.model;
    ForwardModel model = m.eps ? ForwardModel(m.p, m.gamma, *m.eps) : ForwardModel(m.p, m.gamma);
    return DnOracle::analytic(std::move(model), config.solve);
  }
  if (config.table) return oracle_from_table(read_table_csv(*config.table));
  throw Error(Errc::invalid_argument, "config needs a model/profile or a table oracle");
}

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void fail(ReconstructionReport& report, const std::string& stage, const Error& e) {
  report.status = std::string(to_string(e.code()));
  report.failed_stage = stage;
  report.message = e.what();
  report.exit_code = is_numerical(e.code()) ? 3 : 2;
}

}  // namespace

ReconstructionReport run_full(const ExperimentConfig& config) {
  ReconstructionReport report;
  std::string stage = "oracle";
  try {
    Timer t_oracle;
    const DnOracle oracle = make_oracle(config);
    report.seconds["oracle"] = t_oracle.seconds();

    std::optional<double> gamma;
    if (config.model) {
      if (config.model->gamma.is_constant()) gamma = config.model->gamma.values()[0];
    } else {
      gamma = config.table_gamma;
    }
    report.weighted_only = !gamma.has_value();

    stage = "asymptotics";
    Timer t_asym;
    report.extremes = recover_extremes(oracle, config.asymptotics);
    report.support_bound = report.extremes->support_bound();
    report.seconds["asymptotics"] = t_asym.seconds();
    if (config.model) {
      const auto s = stats(config.model->p);
      TruthMetrics truth;
      truth.p_plus_error = std::fabs(report.extremes->p_plus.exponent - s.p_plus);
      truth.p_minus_error = std::fabs(report.extremes->p_minus.exponent - s.p_minus);
      report.truth = truth;
    }
    const auto& ex = *report.extremes;
    if (!(ex.p_minus.exponent > 1.0) || !std::isfinite(ex.p_minus.exponent)) {
      throw Error(Errc::not_converged, "recovered p- is not an exponent > 1");
    }
    const bool asym_converged = ex.p_plus.converged && ex.p_minus.converged &&
                                ex.level_max.converged && ex.level_min.converged;
    if (!asym_converged) {
      report.status = std::string(to_string(Errc::not_converged));
      report.failed_stage = stage;
      report.message = "asymptotic estimates did not meet their convergence targets";
      report.exit_code = 3;
    }
    if (config.stage == Stage::asymptotics || config.stage == Stage::forward) return report;

    stage = "moments";
    Timer t_mom;
    const bool unit_gamma = gamma && *gamma == 1.0;
    report.moments = extract_moments(oracle, config.moments, config.moment_options,
                                     report.support_bound, !unit_gamma);
    report.distribution_moments = to_distribution_moments(*report.moments, report.support_bound);
    report.seconds["moments"] = t_mom.seconds();
    if (config.stage == Stage::moments || report.weighted_only) return report;

    stage = "distribution";
    Timer t_dist;
    const DistributionFn weighted =
        reconstruct_distribution(*report.distribution_moments, config.reconstruction);
    // For constant gamma the recovered measure is gamma^{-f} dx; undo the weight.
    std::vector<Level> levels;
    for (const auto& l : weighted.levels()) {
      levels.push_back({l.value, l.mass * std::pow(*gamma, l.value)});
    }
    report.distribution = DistributionFn(std::move(levels), weighted.support());
    report.distribution->set_coefficients(weighted.coefficients());
    report.seconds["distribution"] = t_dist.seconds();

    stage = "rearrange";
    Timer t_re;
    report.rearrangement = decreasing_rearrangement(*report.distribution);
    const auto& re = *report.rearrangement;
    for (int i = 0; i < config.r_points && re.total() > 0.0; ++i) {
      const double x = re.total() * i / config.r_points;
      if (auto r = re.r(x)) report.r_samples.emplace_back(x, *r);
    }
    report.seconds["rearrange"] = t_re.seconds();

    if (config.model) {
      stage = "metrics";
      const auto& p = config.model->p;
      const DistributionFn truth_mu = exponent_distribution(p);
      const auto jumps = truth_mu.jumps();
      auto& truth = *report.truth;
      truth.distribution_sup_gap =
          distribution_gap(*report.distribution, truth_mu, jumps, config.jump_band);
      truth.distribution_sup_gap_full = distribution_gap(*report.distribution, truth_mu, {}, 0.0);
      const StepProfile r_true = Rearrangement(truth_mu).r_profile();
      truth.r_l1 = re.total() > 0.0 ? r_l1_distance(re.r_profile(), r_true, p.interval().length())
                                    : std::numeric_limits<double>::infinity();
    }
  } catch (const Error& e) {
    fail(report, stage, e);
  }
  return report;
}

}  // namespace varexp
