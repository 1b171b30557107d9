#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "varexp/forward.hpp"

namespace varexp {

struct TableSample {
  double m;
  double lambda;
};

/// Oracle backed by the exact forward model.
class AnalyticOracle {
 public:
  explicit AnalyticOracle(ForwardModel model, SolveOptions options = {})
      : model_(std::move(model)), options_(options) {}

  const ForwardModel& model() const noexcept { return model_; }
  const SolveOptions& options() const noexcept { return options_; }

 private:
  ForwardModel model_;
  SolveOptions options_;
};

/// Oracle interpolating log Lambda linearly in log m between samples.
class TableOracle {
 public:
  explicit TableOracle(std::vector<TableSample> samples);

  const std::vector<TableSample>& samples() const noexcept { return samples_; }

  double log_lambda(double log_m) const;
  long double log_m_for_log_k(long double s) const;

 private:
  std::vector<TableSample> samples_;
  std::vector<double> log_m_;
  std::vector<double> log_lambda_;
  bool k_increasing_ = true;
};

/// Queryable black box m -> Lambda(m).
class DnOracle {
 public:
  DnOracle(AnalyticOracle oracle) : impl_(std::move(oracle)) {}
  DnOracle(TableOracle oracle) : impl_(std::move(oracle)) {}

  static DnOracle analytic(ForwardModel model, SolveOptions options = {});

  double operator()(double m) const;

  /// log Lambda(e^x). Analytic oracles never overflow here.
  double log_lambda(double log_m) const;

  /// K_m = Lambda(m) / m.
  double k_of_m(double m) const;

  /// log m such that K_m = e^s. Exact inverse for the analytic oracle; for
  /// tables log K is piecewise linear in log m and the segment solve is exact.
  long double log_m_for_log_k(long double s) const;

  /// Declared query range (0, inf) for the analytic oracle.
  std::pair<double, double> m_range() const;

  bool is_analytic() const noexcept { return std::holds_alternative<AnalyticOracle>(impl_); }

  /// The forward model for analytic oracles, nullptr for tables.
  const ForwardModel* model() const noexcept;
  const TableOracle* table() const noexcept;

 private:
  std::variant<AnalyticOracle, TableOracle> impl_;
};

/// Needs at least 2 samples with m and Lambda strictly increasing.
/// Throws NonMonotoneTable otherwise.
DnOracle oracle_from_table(std::vector<TableSample> samples);

/// CSV with a header naming at least the columns `m` and `lambda`.
std::vector<TableSample> read_table_csv(const std::filesystem::path& path);

}  // namespace varexp
