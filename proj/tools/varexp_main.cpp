// varexp: command line front end.
//
//   varexp forward   --profile p.json --m-grid 1e-3,1e3,61,log --out lambda.csv
//   varexp invert    --oracle p.json|table.csv [--stage asymptotics|full] --out report.json
//   varexp moments   --oracle p.json|table.csv --n 12 --scheme cheb --out moments.json
//   varexp rearrange --profile p.json | --moments m.json --out rearranged.csv
//   varexp verify
//
// Every subcommand accepts --config <json>; flags given on the command line
// win over values from the file. Exit codes: 0 ok, 2 configuration or input
// error, 3 numerical non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "varexp/acceptance.hpp"
#include "varexp/error.hpp"
#include "varexp/pipeline.hpp"
#include "varexp/profile_io.hpp"
#include "varexp/report_io.hpp"

namespace {

using nlohmann::json;
using namespace varexp;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Flags {
  std::string config;
  std::string profile;
  std::string oracle;
  std::string moments_file;
  std::string m_grid;
  std::string stage;
  std::string scheme;
  std::string method;
  std::string out;
  double tol = 0.0;
  double decades = 0.0;
  double depth = 0.0;
  double gamma = 0.0;
  double window = 0.0;
  double ridge = 0.0;
  int n = 0;
  int basis = 0;
  int points = 0;
  int criterion = 0;
  std::uint64_t seed = kAcceptanceSeed;
};

bool given(const CLI::App* app, const char* name) {
  const auto* opt = app->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

bool is_csv(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

void set_oracle(ExperimentConfig& c, const std::string& path) {
  if (is_csv(path)) {
    c.table = path;
    c.model.reset();
  } else {
    c.model = model_from_json(read_json_file(path));
    c.table.reset();
  }
}

// Config file first, then explicit flags on top.
ExperimentConfig resolve(const CLI::App* app, const Flags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) c = config_from_json(read_json_file(f.config));
  if (given(app, "--profile")) c.model = model_from_json(read_json_file(f.profile));
  if (given(app, "--oracle")) set_oracle(c, f.oracle);
  if (given(app, "--m-grid")) c.m_grid = parse_grid(f.m_grid);
  if (given(app, "--tol")) c.solve.tol = f.tol;
  if (given(app, "--stage")) c.stage = stage_from_string(f.stage);
  if (given(app, "--decades")) c.asymptotics.decades = f.decades;
  if (given(app, "--depth")) c.asymptotics.depth = f.depth;
  if (given(app, "--gamma")) c.table_gamma = f.gamma;
  if (given(app, "--n")) c.moments = f.n;
  if (given(app, "--scheme")) c.moment_options.scheme = scheme_from_string(f.scheme);
  if (given(app, "--window")) c.moment_options.window = f.window;
  if (given(app, "--basis")) c.reconstruction.basis_size = f.basis;
  if (given(app, "--ridge")) c.reconstruction.regularization = f.ridge;
  if (given(app, "--method")) c.reconstruction.method = method_from_string(f.method);
  if (given(app, "--points")) c.r_points = f.points;
  if (given(app, "--out")) c.out = f.out;
  return c;
}

void echo_config(const ExperimentConfig& c) {
  if (c.out) write_json_file(*c.out + ".config.json", to_json(c));
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + *path);
  out << text;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run_forward(const ExperimentConfig& c) {
  if (!c.model) throw Error(Errc::invalid_argument, "forward needs --profile");
  const ForwardModel model = c.model->eps ? ForwardModel(c.model->p, c.model->gamma, *c.model->eps)
                                          : ForwardModel(c.model->p, c.model->gamma);
  std::string csv = "m,K,lambda\n";
  for (double m : make_grid(c.m_grid)) {
    const double K = model.solve_K(m, c.solve);
    csv += g17(m) + "," + g17(K) + "," + g17(model.dn_map(m, c.solve)) + "\n";
  }
  write_text(c.out, csv);
  echo_config(c);
  return kOk;
}

int run_invert(const ExperimentConfig& c) {
  const ReconstructionReport report = run_full(c);
  json doc = to_json(report);
  doc["config"] = to_json(c);
  write_text(c.out, doc.dump(2) + "\n");
  echo_config(c);
  if (!report.ok()) std::cerr << "varexp: " << report.failed_stage << ": " << report.message << "\n";
  return report.exit_code;
}

int run_moments(const ExperimentConfig& c) {
  const DnOracle oracle = make_oracle(c);
  const auto extremes = recover_extremes(oracle, c.asymptotics);
  const double M = extremes.support_bound();
  const bool unit_gamma = c.model ? (c.model->gamma.is_constant() && c.model->gamma.values()[0] == 1.0)
                                  : c.table_gamma == 1.0;
  const MomentSequence seq = extract_moments(oracle, c.moments, c.moment_options, M, !unit_gamma);
  json doc = to_json(seq);
  doc["M"] = M;
  doc["d"] = to_json(to_distribution_moments(seq, M))["d"];
  doc["config"] = to_json(c);
  write_text(c.out, doc.dump(2) + "\n");
  echo_config(c);
  return kOk;
}

int run_rearrange(const ExperimentConfig& c, const std::string& moments_file) {
  DistributionFn mu;
  if (!moments_file.empty()) {
    mu = reconstruct_distribution(distribution_moments_from_json(read_json_file(moments_file)),
                                  c.reconstruction);
  } else if (c.model) {
    mu = exponent_distribution(c.model->p);
  } else {
    throw Error(Errc::invalid_argument, "rearrange needs --moments or --profile");
  }
  if (c.r_points < 1) throw Error(Errc::invalid_argument, "--points must be at least 1");
  const Rearrangement re = decreasing_rearrangement(mu);
  std::string csv = "x,f_star,r\n";
  for (int i = 0; i < c.r_points; ++i) {
    const double x = re.total() * i / c.r_points;
    const auto r = re.r(x);
    csv += g17(x) + "," + g17(re.f_star(x)) + "," + (r ? g17(*r) : std::string()) + "\n";
  }
  write_text(c.out, csv);
  echo_config(c);
  return kOk;
}

int run_verify(int criterion, std::uint64_t seed) {
  bool all = true;
  for (int id = 1; id <= kCriteriaCount; ++id) {
    if (criterion != 0 && id != criterion) continue;
    const auto r = run_criterion(id, seed);
    std::cout << format_result(r) << std::endl;
    all = all && r.passed;
  }
  return all ? kOk : kNumericalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varexp: DN map of the 1D variable exponent p(x)-Laplacian and its inversion"};
  app.require_subcommand(1);
  Flags f;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config; explicit flags override it")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output file (stdout when omitted)");
  };

  auto* forward = app.add_subcommand("forward", "tabulate m, K_m, Lambda(m)");
  add_config(forward);
  forward->add_option("--profile", f.profile, "profile or model JSON")->check(CLI::ExistingFile);
  forward->add_option("--m-grid", f.m_grid, "start,stop,count,log|lin");
  forward->add_option("--tol", f.tol, "relative residual of the K_m solve");

  auto* invert = app.add_subcommand("invert", "recover p+/p-, level sets, moments and r(x)");
  add_config(invert);
  invert->add_option("--oracle", f.oracle, "model JSON or m,lambda CSV table")->check(CLI::ExistingFile);
  invert->add_option("--stage", f.stage, "asymptotics | moments | full");
  invert->add_option("--decades", f.decades, "probe decades on each side");
  invert->add_option("--depth", f.depth, "probe depth in decades (analytic oracles)");
  invert->add_option("--gamma", f.gamma, "declared constant gamma of a table oracle");
  invert->add_option("--n", f.n, "number of moments");
  invert->add_option("--basis", f.basis, "reconstruction basis size");
  invert->add_option("--ridge", f.ridge, "ridge parameter (Legendre)");
  invert->add_option("--method", f.method, "atomic | legendre");

  auto* moments = app.add_subcommand("moments", "extract weighted moments c_n");
  add_config(moments);
  moments->add_option("--oracle", f.oracle, "model JSON or m,lambda CSV table")->check(CLI::ExistingFile);
  moments->add_option("--n", f.n, "highest moment order N");
  moments->add_option("--scheme", f.scheme, "cheb | fd");
  moments->add_option("--window", f.window, "half width s0 of the window in log K");
  moments->add_option("--gamma", f.gamma, "declared constant gamma of a table oracle");

  auto* rearrange = app.add_subcommand("rearrange", "decreasing rearrangement and r(x) on a grid");
  add_config(rearrange);
  auto* by_moments = rearrange->add_option("--moments", f.moments_file, "moments JSON (d or c, M)")
                         ->check(CLI::ExistingFile);
  rearrange->add_option("--profile", f.profile, "exponent profile JSON")
      ->check(CLI::ExistingFile)
      ->excludes(by_moments);
  rearrange->add_option("--basis", f.basis, "reconstruction basis size");
  rearrange->add_option("--ridge", f.ridge, "ridge parameter (Legendre)");
  rearrange->add_option("--method", f.method, "atomic | legendre");
  rearrange->add_option("--points", f.points, "grid points in the CSV");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--criterion", f.criterion, "run a single criterion (1-10)");
  verify->add_option("--seed", f.seed, "corpus seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*verify) return run_verify(f.criterion, f.seed);
    CLI::App* sub = app.get_subcommands().front();
    const ExperimentConfig c = resolve(sub, f);
    if (*forward) return run_forward(c);
    if (*invert) return run_invert(c);
    if (*moments) return run_moments(c);
    if (*rearrange) return run_rearrange(c, f.moments_file);
  } catch (const Error& e) {
    std::cerr << "varexp: " << e.what() << "\n";
    return is_numerical(e.code()) ? kNumericalError : kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "varexp: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
