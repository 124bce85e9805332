#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixssl/core_types.hpp"

namespace mixssl::cli {

inline constexpr std::array<const char*, 13> kMetricColumns = {
    "SEN_B",     "SPEC_B",     "PREC_B", "ACC_B", "SEN_Omega", "SPEC_Omega", "PREC_Omega",
    "ACC_Omega", "RFE",        "RMSE",   "RMSE_MEAN", "AUC",   "TIME"};

using MetricValues = std::array<std::optional<double>, kMetricColumns.size()>;

/// All matrices share one outcome order, given by `kinds`.
struct EvaluationInputs {
  Matrix B_hat;
  Matrix Omega_hat;
  std::vector<OutcomeKind> kinds;
  std::optional<Matrix> B_true;
  std::optional<Matrix> Omega_true;
  /// Test covariates on the design scale B_hat was fitted on.
  std::optional<Matrix> X_test_fit_scale;
  /// The same rows on the scale of B_true.
  std::optional<Matrix> X_test;
  std::optional<Matrix> Y_test;
  std::optional<double> fit_seconds;
  std::uint64_t seed = 0;
  int prediction_draws = 1;
};

MetricValues evaluate(const EvaluationInputs& in);

/// Column-wise mean over the rows where each value is present.
MetricValues mean_row(const std::vector<MetricValues>& rows);

std::string format_metric(const std::optional<double>& value);

}  // namespace mixssl::cli
