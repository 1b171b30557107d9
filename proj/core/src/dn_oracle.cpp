#include "varexp/dn_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "varexp/error.hpp"

namespace varexp {

namespace {

[[noreturn]] void out_of_range(double m, const std::vector<TableSample>& samples) {
  std::ostringstream os;
  os << "m = " << m << " outside the table range [" << samples.front().m << ", "
     << samples.back().m << "]";
  throw Error(Errc::out_of_range, os.str());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TableOracle::TableOracle(std::vector<TableSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw Error(Errc::non_monotone_table, "a table oracle needs at least two samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!(s.m > 0.0) || !(s.lambda > 0.0) || !std::isfinite(s.m) || !std::isfinite(s.lambda)) {
      std::ostringstream os;
      os << "sample " << i << " must have finite m > 0 and Lambda > 0";
      throw Error(Errc::non_monotone_table, os.str());
    }
    if (i > 0 && !(s.m > samples_[i - 1].m && s.lambda > samples_[i - 1].lambda)) {
      std::ostringstream os;
      os << "samples " << i - 1 << " and " << i << " are not strictly increasing";
      throw Error(Errc::non_monotone_table, os.str());
    }
    log_m_.push_back(std::log(s.m));
    log_lambda_.push_back(std::log(s.lambda));
  }
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(log_lambda_[i] - log_m_[i] > log_lambda_[i - 1] - log_m_[i - 1])) k_increasing_ = false;
  }
}

double TableOracle::log_lambda(double log_m) const {
  if (!(log_m >= log_m_.front() && log_m <= log_m_.back())) {
    out_of_range(std::exp(log_m), samples_);
  }
  auto it = std::upper_bound(log_m_.begin(), log_m_.end(), log_m);
  if (it == log_m_.end()) return log_lambda_.back();
  const std::size_t j = static_cast<std::size_t>(it - log_m_.begin());
  const double t = (log_m - log_m_[j - 1]) / (log_m_[j] - log_m_[j - 1]);
  return log_lambda_[j - 1] + t * (log_lambda_[j] - log_lambda_[j - 1]);
}

long double TableOracle::log_m_for_log_k(long double s) const {
  if (!k_increasing_) {
    throw Error(Errc::non_monotone_table, "K = Lambda/m is not increasing along the table");
  }
  const std::size_t n = log_m_.size();
  auto log_k = [&](std::size_t i) {
    return static_cast<long double>(log_lambda_[i]) - static_cast<long double>(log_m_[i]);
  };
  if (!(s >= log_k(0) && s <= log_k(n - 1))) {
    std::ostringstream os;
    os << "K = " << static_cast<double>(std::exp(s)) << " outside the table's K range";
    throw Error(Errc::out_of_range, os.str());
  }
  std::size_t j = 1;
  while (j + 1 < n && log_k(j) < s) ++j;
  const long double k0 = log_k(j - 1);
  const long double k1 = log_k(j);
  const long double t = (s - k0) / (k1 - k0);
  return log_m_[j - 1] + t * (static_cast<long double>(log_m_[j]) - log_m_[j - 1]);
}

DnOracle DnOracle::analytic(ForwardModel model, SolveOptions options) {
  return DnOracle(AnalyticOracle(std::move(model), options));
}

double DnOracle::operator()(double m) const {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(Errc::invalid_argument, "the DN map is queried at finite m > 0");
  }
  if (const auto* a = std::get_if<AnalyticOracle>(&impl_)) {
    return a->model().dn_map(m, a->options());
  }
  const auto& t = std::get<TableOracle>(impl_);
  if (m == t.samples().front().m) return t.samples().front().lambda;
  if (m == t.samples().back().m) return t.samples().back().lambda;
  return std::exp(t.log_lambda(std::log(m)));
}

double DnOracle::log_lambda(double log_m) const {
  if (const auto* a = std::get_if<AnalyticOracle>(&impl_)) {
    return a->model().log_dn_map(log_m, a->options());
  }
  return std::get<TableOracle>(impl_).log_lambda(log_m);
}

double DnOracle::k_of_m(double m) const {
  if (const auto* a = std::get_if<AnalyticOracle>(&impl_)) {
    return a->model().solve_K(m, a->options());
  }
  return (*this)(m) / m;
}

long double DnOracle::log_m_for_log_k(long double s) const {
  if (const auto* a = std::get_if<AnalyticOracle>(&impl_)) {
    return a->model().log_m_of_log_K(s);
  }
  return std::get<TableOracle>(impl_).log_m_for_log_k(s);
}

std::pair<double, double> DnOracle::m_range() const {
  if (is_analytic()) return {0.0, std::numeric_limits<double>::infinity()};
  const auto& samples = std::get<TableOracle>(impl_).samples();
  return {samples.front().m, samples.back().m};
}

const ForwardModel* DnOracle::model() const noexcept {
  const auto* a = std::get_if<AnalyticOracle>(&impl_);
  return a ? &a->model() : nullptr;
}

const TableOracle* DnOracle::table() const noexcept {
  return std::get_if<TableOracle>(&impl_);
}

DnOracle oracle_from_table(std::vector<TableSample> samples) {
  return DnOracle(TableOracle(std::move(samples)));
}

std::vector<TableSample> read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, path.string() + " is empty");
  const auto header = split_csv(line);
  auto col = [&](const char* name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(Errc::parse_error, path.string() + ": missing column \"" + name + "\"");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t im = col("m");
  const std::size_t il = col("lambda");
  std::vector<TableSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() <= std::max(im, il)) {
      throw Error(Errc::parse_error,
                  path.string() + ":" + std::to_string(line_no) + ": too few columns");
    }
    try {
      samples.push_back({std::stod(cells[im]), std::stod(cells[il])});
    } catch (const std::exception&) {
      throw Error(Errc::parse_error,
                  path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  return samples;
}

}  // namespace varexp
