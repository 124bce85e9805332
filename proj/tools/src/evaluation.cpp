#include "mixssl_cli/evaluation.hpp"

#include <algorithm>

#include "mixssl/errors.hpp"
#include "mixssl/metrics.hpp"
#include "mixssl_cli/io.hpp"

namespace mixssl::cli {

namespace {

void put_support(MetricValues& out, std::size_t offset, const metrics::SupportReport& r) {
  out[offset] = r.sensitivity;
  out[offset + 1] = r.specificity;
  out[offset + 2] = r.precision;
  out[offset + 3] = r.accuracy;
}

void require_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (M.rows() != rows || M.cols() != cols)
    throw InputShapeError(std::string(what) + " is " + std::to_string(M.rows()) + "x" +
                          std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
}

}  // namespace

MetricValues evaluate(const EvaluationInputs& in) {
  const Eigen::Index p = in.B_hat.rows();
  const auto q = static_cast<Eigen::Index>(in.kinds.size());
  require_shape(in.B_hat, p, q, "B_hat");
  require_shape(in.Omega_hat, q, q, "Omega_hat");
  const bool has_binary = std::any_of(in.kinds.begin(), in.kinds.end(),
                                      [](OutcomeKind k) { return k == OutcomeKind::Binary; });

  MetricValues out;
  if (in.B_true) {
    require_shape(*in.B_true, p, q, "truth_B");
    put_support(out, 0, metrics::support_metrics(metrics::support_of(in.B_hat),
                                                 metrics::support_of(*in.B_true)));
  }
  if (in.Omega_true) {
    require_shape(*in.Omega_true, q, q, "truth_Omega");
    put_support(out, 4,
                metrics::support_metrics(metrics::support_of(in.Omega_hat),
                                         metrics::support_of(*in.Omega_true),
                                         metrics::Region::StrictUpper));
  }

  if (in.X_test_fit_scale) {
    const Matrix& Xf = *in.X_test_fit_scale;
    if (Xf.cols() != p) throw InputShapeError("test covariates do not match B_hat rows");
    if (in.B_true && in.X_test && (in.Omega_true || !has_binary)) {
      const Matrix omega_true = in.Omega_true ? *in.Omega_true : Matrix::Identity(q, q);
      out[8] = metrics::mean_row_distance(
          metrics::conditional_mean(Xf, in.B_hat, in.Omega_hat, in.kinds),
          metrics::conditional_mean(*in.X_test, *in.B_true, omega_true, in.kinds));
    }
    if (in.Y_test) {
      require_shape(*in.Y_test, Xf.rows(), q, "test Y");
      const Dataset test = Dataset::from_user_order(Xf, *in.Y_test, in.kinds);
      ModelState state;
      state.B = columns_to_canonical_order(in.B_hat, test.column_order);
      state.Omega = outcome_matrix_to_canonical_order(in.Omega_hat, test.column_order);
      const auto scores = metrics::predictive_scores(test, state, in.seed, in.prediction_draws);
      out[9] = scores.rmse_continuous;
      out[10] = scores.rmse_mean_continuous;
      out[11] = scores.auc_binary;
    }
  }
  out[12] = in.fit_seconds;
  return out;
}

MetricValues mean_row(const std::vector<MetricValues>& rows) {
  MetricValues out;
  for (std::size_t c = 0; c < kMetricColumns.size(); ++c) {
    double sum = 0.0;
    int count = 0;
    for (const auto& row : rows) {
      if (row[c]) {
        sum += *row[c];
        ++count;
      }
    }
    if (count > 0) out[c] = sum / count;
  }
  return out;
}

std::string format_metric(const std::optional<double>& value) {
  return value ? format_double(*value) : "NA";
}

}  // namespace mixssl::cli
