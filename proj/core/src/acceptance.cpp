#include "varexp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

#include "varexp/asymptotics.hpp"
#include "varexp/dn_oracle.hpp"
#include "varexp/error.hpp"
#include "varexp/forward.hpp"
#include "varexp/moments.hpp"
#include "varexp/pipeline.hpp"
#include "varexp/rearrange.hpp"
#include "varexp/reference.hpp"

namespace varexp {

namespace {

StepProfile from_lengths(Interval interval, const std::vector<double>& lengths,
                         std::vector<double> values) {
  std::vector<double> breaks;
  double x = interval.a();
  for (std::size_t j = 0; j + 1 < lengths.size(); ++j) {
    x += lengths[j];
    breaks.push_back(x);
  }
  return StepProfile(interval, std::move(breaks), std::move(values));
}

std::vector<double> separated_values(Uniform& u, int n, double lo, double hi, double sep) {
  while (true) {
    std::vector<double> v;
    for (int j = 0; j < n; ++j) v.push_back(u(lo, hi));
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (int j = 1; j < n; ++j) ok = ok && s[j] - s[j - 1] >= sep;
    if (ok) return v;
  }
}

std::vector<double> random_lengths(Uniform& u, int n, double total) {
  std::vector<double> w;
  for (int j = 0; j < n; ++j) w.push_back(u(1.0, 4.0));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x = total * x / sum;
  return w;
}

std::size_t arg_extreme(const std::vector<double>& v, bool max) {
  auto it = max ? std::max_element(v.begin(), v.end()) : std::min_element(v.begin(), v.end());
  return static_cast<std::size_t>(it - v.begin());
}

// Level separation >= 0.05, values in (1.5, 4), 3-5 pieces, both extremes on
// pieces of length >= 0.1.
StepProfile broad_extremes_profile(Uniform& u) {
  while (true) {
    const int n = 3 + static_cast<int>(u() * 3.0);
    auto values = separated_values(u, n, 1.5, 4.0, 0.05);
    auto lengths = random_lengths(u, n, 1.0);
    if (lengths[arg_extreme(values, true)] >= 0.1 && lengths[arg_extreme(values, false)] >= 0.1) {
      return from_lengths(Interval(0.0, 1.0), lengths, std::move(values));
    }
  }
}

// As above, plus one piece of length 0.01 carrying the maximum (or the
// minimum) of the profile.
StepProfile thin_extreme_profile(Uniform& u, bool thin_max) {
  StepProfile base = broad_extremes_profile(u);
  std::vector<double> values(base.values().begin(), base.values().end());
  std::vector<double> lengths;
  for (std::size_t j = 0; j < base.pieces(); ++j) lengths.push_back(0.99 * base.piece_length(j));
  const double delta = u(0.05, 0.3);
  const double v = thin_max ? base.max_value() + delta : base.min_value() - delta;
  const std::size_t at = static_cast<std::size_t>(u() * static_cast<double>(values.size() + 1));
  values.insert(values.begin() + static_cast<std::ptrdiff_t>(at), v);
  lengths.insert(lengths.begin() + static_cast<std::ptrdiff_t>(at), 0.01);
  return from_lengths(Interval(0.0, 1.0), lengths, std::move(values));
}

// Dyadic piece lengths on [0, 1] (multiples of 1/64): sums are exact.
std::vector<double> dyadic_lengths(Uniform& u, int n) {
  std::vector<int> cuts;
  while (static_cast<int>(cuts.size()) < n - 1) {
    const int c = 1 + static_cast<int>(u() * 63.0);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  int prev = 0;
  for (int c : cuts) {
    out.push_back((c - prev) / 64.0);
    prev = c;
  }
  out.push_back((64 - prev) / 64.0);
  return out;
}

std::vector<std::size_t> random_permutation(Uniform& u, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(u() * static_cast<double>(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

double level_length(const StepProfile& p, double value) {
  double len = 0.0;
  for (std::size_t j = 0; j < p.pieces(); ++j) {
    if (p.values()[j] == value) len += p.piece_length(j);
  }
  return len;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome forward_exactness(std::uint64_t seed) {
  Uniform u(seed);
  const auto grid = make_grid({1e-4, 1e4, 25, true});
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double p = u(1.2, 8.0);
    const double gamma = u(0.2, 5.0);
    const double a = u(-1.0, 1.0);
    const Interval I(a, a + u(0.5, 3.0));
    ForwardModel model(StepProfile::constant(I, p), StepProfile::constant(I, gamma));
    for (double m : grid) {
      const double exact = reference::dn_closed_form(p, gamma, I, m);
      worst = std::max(worst, std::fabs(model.dn_map(m) - exact) / exact);
    }
  }
  return {worst <= 1e-12, fmt("max relative error %.2e (limit 1e-12)", worst)};
}

Outcome monotone_bijection(std::uint64_t seed) {
  Uniform u(seed);
  const auto grid = make_grid({1e-6, 1e6, 50, true});
  double worst = 0.0;
  bool increasing = true;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(u() * 7.0);
    StepProfile p = generate_profile(u.bits(), n, {1.2, 8.0});
    StepProfile gamma = generate_profile(u.bits(), n, {1.25, 4.0}).map([](double v) { return v - 1.0; });
    ForwardModel model(p, gamma);
    double previous = 0.0;
    for (double m : grid) {
      const double K = model.solve_K(m);
      increasing = increasing && K > previous;
      previous = K;
      worst = std::max(worst, std::fabs(model.m_of_K(K) - m) / m);
    }
  }
  return {increasing && worst <= 1e-10,
          std::string(increasing ? "K_m strictly increasing" : "K_m NOT increasing") +
              fmt(", max round-trip error %.2e (limit 1e-10)", worst)};
}

Outcome equimeasurable_forward(std::uint64_t seed) {
  Uniform u(seed);
  const auto grid = make_grid({1e-4, 1e4, 25, true});
  const double gammas[] = {0.5, 1.0, 4.0};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(u() * 7.0);
    StepProfile p = generate_profile(u.bits(), n, {1.2, 8.0});
    StepProfile q = p.permuted(random_permutation(u, p.pieces()));
    const double g = gammas[i % 3];
    const StepProfile gamma = StepProfile::constant(p.interval(), g);
    worst = std::max(worst, compare_dn_maps(ForwardModel(p, gamma), ForwardModel(q, gamma), grid));
  }
  return {worst <= 1e-12, fmt("max DN-map gap %.2e (limit 1e-12)", worst)};
}

Outcome exponent_recovery(std::uint64_t seed) {
  Uniform u(seed);
  const AsymptoticsConfig config;
  double broad = 0.0;
  double thin = 0.0;
  for (int i = 0; i < 20; ++i) {
    const bool is_thin = i >= 10;
    const bool thin_max = i % 2 == 0;
    StepProfile p = is_thin ? thin_extreme_profile(u, thin_max) : broad_extremes_profile(u);
    const auto s = stats(p);
    const auto est = recover_extremes(DnOracle::analytic(ForwardModel(p, StepProfile::constant(p.interval(), 1.0))), config);
    const double e_plus = std::fabs(est.p_plus.exponent - s.p_plus);
    const double e_minus = std::fabs(est.p_minus.exponent - s.p_minus);
    if (!is_thin) {
      broad = std::max({broad, e_plus, e_minus});
    } else {
      thin = std::max(thin, thin_max ? e_plus : e_minus);
      broad = std::max(broad, thin_max ? e_minus : e_plus);
    }
  }
  return {broad <= 1e-2 && thin <= 5e-2,
          fmt("max error %.2e on measure >= 0.1 (limit 1e-2), %.2e on measure 0.01 (limit 5e-2)",
              broad, thin)};
}

Outcome level_sets(std::uint64_t seed) {
  Uniform u(seed);
  double worst = 0.0;
  bool converged = true;
  for (int i = 0; i < 20; ++i) {
    StepProfile p = i < 10 ? broad_extremes_profile(u) : thin_extreme_profile(u, i % 2 == 0);
    const auto s = stats(p);
    const auto est = recover_extremes(DnOracle::analytic(ForwardModel(p, StepProfile::constant(p.interval(), 1.0))));
    const double len_max = level_length(p, s.p_plus);
    const double len_min = level_length(p, s.p_minus);
    converged = converged && est.level_max.converged && est.level_min.converged;
    worst = std::max({worst, std::fabs(est.level_max.value - len_max) / len_max,
                      std::fabs(est.level_min.value - len_min) / len_min});
  }
  return {converged && worst <= 0.01,
          fmt("max relative error %.2e (limit 1e-2)", worst) +
              (converged ? "" : ", some extrapolations did not converge")};
}

Outcome moment_extraction(std::uint64_t seed) {
  Uniform u(seed);
  double low = 0.0;
  double high = 0.0;
  int min_n = 16;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(u() * 5.0);
    StepProfile p = generate_profile(u.bits(), n, {1.5, 4.0});
    const StepProfile gamma = StepProfile::constant(p.interval(), 1.0);
    const DnOracle oracle = DnOracle::analytic(ForwardModel(p, gamma));
    const auto ex = recover_extremes(oracle);
    const auto c = extract_moments(oracle, 16, {}, ex.support_bound(), false);
    min_n = std::min(min_n, c.N);
    for (int k = 0; k <= c.N; ++k) {
      const double exact = reference::moments_exact(p, gamma, k);
      const double err = std::fabs(c.c[k] - exact) / exact;
      (k <= 8 ? low : high) = std::max(k <= 8 ? low : high, err);
    }
  }
  return {min_n == 16 && low <= 1e-8 && high <= 1e-4,
          fmt("max relative error %.2e for n <= 8 (limit 1e-8), %.2e for n <= 16 (limit 1e-4)", low,
              high) +
              (min_n == 16 ? "" : ", conditioning truncated N to " + std::to_string(min_n))};
}

struct RoundTrip {
  double l1_ratio = 0.0;   // L1 / (0.05 (p+ - p-) (b - a))
  double gap_ratio = 0.0;  // sup gap / (0.05 (b - a))
  std::string failure;
};

RoundTrip round_trips(std::uint64_t seed, double gamma) {
  Uniform u(seed);
  RoundTrip out;
  for (int i = 0; i < 10; ++i) {
    auto values = separated_values(u, 3, 1.5, 4.0, 0.05);
    StepProfile p = from_lengths(Interval(0.0, 1.0), random_lengths(u, 3, 1.0), values);
    ExperimentConfig config;
    config.model = ModelSpec{p, StepProfile::constant(p.interval(), gamma), std::nullopt};
    const auto report = run_full(config);
    if (!report.ok() || !report.truth) {
      out.failure = report.status + ": " + report.message;
      out.l1_ratio = out.gap_ratio = std::numeric_limits<double>::infinity();
      return out;
    }
    const auto s = stats(p);
    const double L = p.interval().length();
    out.l1_ratio = std::max(out.l1_ratio, report.truth->r_l1 / (0.05 * (s.p_plus - s.p_minus) * L));
    out.gap_ratio = std::max(out.gap_ratio, report.truth->distribution_sup_gap / (0.05 * L));
  }
  return out;
}

Outcome pipeline_round_trip(std::uint64_t seed) {
  const auto rt = round_trips(seed, 1.0);
  if (!rt.failure.empty()) return {false, "pipeline failed: " + rt.failure};
  return {rt.l1_ratio <= 1.0 && rt.gap_ratio <= 1.0,
          fmt("r L1 at %.2e of tolerance, distribution sup gap at %.2e of tolerance", rt.l1_ratio,
              rt.gap_ratio)};
}

Outcome constant_gamma(std::uint64_t seed) {
  const auto rt = round_trips(seed, 4.0);
  if (!rt.failure.empty()) return {false, "pipeline failed: " + rt.failure};
  return {rt.l1_ratio <= 2.0 && rt.gap_ratio <= 2.0,
          fmt("gamma = 4: r L1 at %.2e, sup gap at %.2e of the single-run tolerance (limit 2)",
              rt.l1_ratio, rt.gap_ratio)};
}

MonotoneMap random_map(Uniform& u, int i, double f_min, double f_max) {
  switch (i % 5) {
    case 0: return MonotoneMap::reciprocal_shift();
    case 1: {
      const double a = (u() < 0.5 ? -1.0 : 1.0) * u(0.5, 2.0);
      return MonotoneMap::affine(a, a < 0.0 ? -a * f_max + 1.0 : 1.0);
    }
    case 2: {
      const double powers[] = {-2.0, -0.5, 0.5, 2.0, 3.0};
      return MonotoneMap::power(powers[static_cast<int>(u() * 5.0)]);
    }
    case 3: return MonotoneMap::exp((u() < 0.5 ? -1.0 : 1.0) * u(0.2, 1.0));
    default: return MonotoneMap::log(0.5 - std::log(f_min));
  }
}

Outcome monotone_composition(std::uint64_t seed) {
  Uniform u(seed);
  int failures = 0;
  int decreasing_cases = 0;
  for (int i = 0; i < 100; ++i) {
    const Interval I(0.0, 1.0);
    const int n = 2 + static_cast<int>(u() * 7.0);
    const auto lengths = dyadic_lengths(u, n);
    std::vector<double> f_values, gamma_values, p_values;
    for (int j = 0; j < n; ++j) {
      f_values.push_back(u(0.1, 3.0));
      gamma_values.push_back(u(0.25, 4.0));
      p_values.push_back(u(1.2, 6.0));
    }
    const auto order = random_permutation(u, static_cast<std::size_t>(n));
    auto permute = [&](const std::vector<double>& v) {
      std::vector<double> out;
      for (std::size_t k : order) out.push_back(v[k]);
      return out;
    };
    // g: the pieces of f in another order, each carrying its weight; one
    // piece is additionally split in two equal halves.
    std::vector<double> g_lengths = permute(lengths);
    auto g_values = permute(f_values), g_gamma = permute(gamma_values), g_p = permute(p_values);
    const std::size_t split = static_cast<std::size_t>(u() * n);
    g_lengths[split] *= 0.5;
    g_lengths.insert(g_lengths.begin() + static_cast<std::ptrdiff_t>(split), g_lengths[split]);
    g_values.insert(g_values.begin() + static_cast<std::ptrdiff_t>(split), g_values[split]);
    g_gamma.insert(g_gamma.begin() + static_cast<std::ptrdiff_t>(split), g_gamma[split]);
    g_p.insert(g_p.begin() + static_cast<std::ptrdiff_t>(split), g_p[split]);

    const StepProfile f = from_lengths(I, lengths, f_values);
    const StepProfile g = from_lengths(I, g_lengths, g_values);
    const WeightedMeasure mu_f(from_lengths(I, lengths, gamma_values), from_lengths(I, lengths, p_values));
    const WeightedMeasure mu_g(from_lengths(I, g_lengths, g_gamma), from_lengths(I, g_lengths, g_p));

    const MonotoneMap h = random_map(u, i, f.min_value(), f.max_value());
    decreasing_cases += h.decreasing() ? 1 : 0;
    const bool base = equimeasurable(distribution_of(f, mu_f), distribution_of(g, mu_g), 0.0).equal;
    const bool composed = equimeasurable(distribution_of(compose_monotone(f, h), mu_f),
                                         distribution_of(compose_monotone(g, h), mu_g), 0.0)
                              .equal;
    if (!(base && composed)) ++failures;
  }
  return {failures == 0, std::to_string(100 - failures) + "/100 cases exactly equal (" +
                             std::to_string(decreasing_cases) + " with decreasing h)"};
}

Outcome rearrangement_identities(std::uint64_t seed) {
  Uniform u(seed);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(u() * 10.0);
    const auto lengths = dyadic_lengths(u, n);
    std::vector<double> p_values;
    for (int j = 0; j < n; ++j) p_values.push_back(u(1.2, 8.0));
    const StepProfile f = f_of_p(from_lengths(Interval(0.0, 1.0), lengths, p_values));
    const DistributionFn mu = distribution_of(f);
    const Rearrangement re = decreasing_rearrangement(mu);
    const StepProfile fs = re.as_profile();
    const StepProfile r = re.r_profile();
    bool ok = distribution_of(fs) == mu && equimeasurable(distribution_of(fs), mu, 0.0).equal;
    for (std::size_t j = 1; j < fs.pieces(); ++j) {
      ok = ok && fs.values()[j] <= fs.values()[j - 1] && r.values()[j] >= r.values()[j - 1];
    }
    if (!ok) ++failures;
  }
  return {failures == 0, std::to_string(100 - failures) +
                             "/100 profiles: f* equimeasurable, non-increasing, r non-decreasing"};
}

struct Criterion {
  const char* name;
  std::function<Outcome(std::uint64_t)> run;
};

const Criterion kCriteria[kCriteriaCount] = {
    {"forward exactness, constant exponent", forward_exactness},
    {"monotone bijection m -> K_m", monotone_bijection},
    {"permuted exponents give equal DN maps", equimeasurable_forward},
    {"recovery of p+ and p-", exponent_recovery},
    {"level-set integrals", level_sets},
    {"moment extraction", moment_extraction},
    {"moment pipeline round trip", pipeline_round_trip},
    {"constant gamma != 1 round trip", constant_gamma},
    {"monotone composition preserves equimeasurability", monotone_composition},
    {"rearrangement identities", rearrangement_identities},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriteriaCount) throw Error(Errc::invalid_argument, "criterion id out of range");
  const auto& c = kCriteria[id - 1];
  CriterionResult out;
  out.id = id;
  out.name = c.name;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto outcome = c.run(seed + static_cast<std::uint64_t>(id) * 1000003u);
    out.passed = outcome.passed;
    out.detail = outcome.detail;
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteriaCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s  %2d  ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, "  (%.2f s)", r.seconds);
  return std::string(head) + r.name + ": " + r.detail + tail;
}

}  // namespace varexp
