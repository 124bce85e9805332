#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixssl/core_types.hpp"

namespace mixssl::metrics {

using SupportPattern = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

SupportPattern support_of(const Matrix& M, double zero_tol = 0.0);

enum class Region { Full, StrictUpper };

/// Confusion-matrix summary. Ratios with a zero denominator are absent.
struct SupportReport {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> accuracy;
};

SupportReport support_metrics(const SupportPattern& estimated, const SupportPattern& truth,
                              Region region = Region::Full);

/// E[Y | X]: x^T b for continuous outcomes, Phi(x^T b / sqrt((Omega^{-1})_kk))
/// for binary ones.
Matrix conditional_mean(const Matrix& X, const Matrix& B, const Matrix& Omega,
                        const std::vector<OutcomeKind>& kinds);

/// Mean over rows of the Euclidean distance between two mean matrices.
double mean_row_distance(const Matrix& A, const Matrix& B);

double regression_function_error(const Matrix& X_test, const Matrix& B_hat,
                                 const Matrix& Omega_hat, const Matrix& B_true,
                                 const Matrix& Omega_true,
                                 const std::vector<OutcomeKind>& kinds);

/// Mann-Whitney AUC with tied scores sharing the average rank. Absent when
/// the labels are all equal.
std::optional<double> auc(std::span<const double> scores, std::span<const double> labels);

struct PredictiveScores {
  std::optional<double> rmse_continuous;       // forward draws from the fit
  std::optional<double> rmse_mean_continuous;  // conditional-mean prediction
  std::optional<double> auc_binary;
};

/// `test.X` must be on the design scale the state was fitted on.
PredictiveScores predictive_scores(const Dataset& test, const ModelState& state,
                                   std::uint64_t seed, int prediction_draws = 1);

/// beta_jk kept iff |beta_jk| > a_n omega_kk, a_n^2 = c^2 log(p) / (n p^2).
double screening_level(double c, Eigen::Index n, Eigen::Index p);
SupportPattern sure_screen(const Matrix& B, const Matrix& Omega, Eigen::Index n,
                           Eigen::Index p, double c);

}  // namespace mixssl::metrics
