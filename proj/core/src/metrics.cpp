#include "mixssl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixssl/errors.hpp"
#include "mixssl/linalg.hpp"
#include "mixssl/rng.hpp"

namespace mixssl::metrics {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_of_present(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

SupportPattern support_of(const Matrix& M, double zero_tol) {
  return M.array().abs() > zero_tol;
}

SupportReport support_metrics(const SupportPattern& estimated, const SupportPattern& truth,
                              Region region) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols())
    throw InputShapeError("support_metrics: patterns differ in shape");
  if (region == Region::StrictUpper && estimated.rows() != estimated.cols())
    throw InputShapeError("support_metrics: upper-triangle region needs a square pattern");
  SupportReport r;
  for (Eigen::Index j = 0; j < truth.cols(); ++j) {
    for (Eigen::Index i = 0; i < truth.rows(); ++i) {
      if (region == Region::StrictUpper && i >= j) continue;
      const bool e = estimated(i, j);
      const bool t = truth(i, j);
      if (e && t) ++r.tp;
      else if (e) ++r.fp;
      else if (t) ++r.fn;
      else ++r.tn;
    }
  }
  r.sensitivity = ratio(r.tp, r.tp + r.fn);
  r.specificity = ratio(r.tn, r.tn + r.fp);
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.accuracy = ratio(r.tp + r.tn, r.tp + r.tn + r.fp + r.fn);
  return r;
}

Matrix conditional_mean(const Matrix& X, const Matrix& B, const Matrix& Omega,
                        const std::vector<OutcomeKind>& kinds) {
  if (X.cols() != B.rows() || B.cols() != Omega.rows() ||
      static_cast<Eigen::Index>(kinds.size()) != B.cols())
    throw InputShapeError("conditional_mean: dimensions do not conform");
  Matrix mean = X * B;
  bool any_binary = std::any_of(kinds.begin(), kinds.end(),
                                [](OutcomeKind k) { return k == OutcomeKind::Binary; });
  if (!any_binary) return mean;
  const Matrix sigma = linalg::pd_inverse(Omega);
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    if (kinds[k] != OutcomeKind::Binary) continue;
    const auto kk = static_cast<Eigen::Index>(k);
    const double sd = std::sqrt(sigma(kk, kk));
    mean.col(kk) = mean.col(kk).unaryExpr([sd](double m) { return normal_cdf(m / sd); });
  }
  return mean;
}

double mean_row_distance(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw InputShapeError("mean_row_distance: matrices differ in shape");
  if (A.rows() == 0) return 0.0;
  return (A - B).rowwise().norm().mean();
}

double regression_function_error(const Matrix& X_test, const Matrix& B_hat,
                                 const Matrix& Omega_hat, const Matrix& B_true,
                                 const Matrix& Omega_true,
                                 const std::vector<OutcomeKind>& kinds) {
  return mean_row_distance(conditional_mean(X_test, B_hat, Omega_hat, kinds),
                           conditional_mean(X_test, B_true, Omega_true, kinds));
}

std::optional<double> auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size())
    throw InputShapeError("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const double avg_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t t = start; t < end; ++t) {
      if (labels[order[t]] == 1.0) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    start = end;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double np = static_cast<double>(positives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(negatives));
}

PredictiveScores predictive_scores(const Dataset& test, const ModelState& state,
                                   std::uint64_t seed, int prediction_draws) {
  if (prediction_draws < 1) throw ParameterError("predictive_scores: prediction_draws must be >= 1");
  const Eigen::Index n = test.n();
  const Eigen::Index q = test.q();
  if (state.B.rows() != test.p() || state.B.cols() != q)
    throw InputShapeError("predictive_scores: model and test data do not conform");

  const Matrix mean = test.X * state.B;
  const Matrix sigma = linalg::pd_inverse(state.Omega);
  const auto factor = linalg::cholesky_or_throw(sigma, "predictive_scores");

  // Forward draws: row-major standard normals from a single seeded engine.
  Engine rng = make_engine(seed);
  std::normal_distribution<double> normal;
  Vector sq_err = Vector::Zero(q);
  for (int d = 0; d < prediction_draws; ++d) {
    Matrix E(n, q);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < q; ++k) E(i, k) = normal(rng);
    const Matrix draw = mean + E * factor.L.transpose();
    for (Eigen::Index k = 0; k < q; ++k)
      if (test.kinds[static_cast<std::size_t>(k)] == OutcomeKind::Continuous)
        sq_err(k) += (draw.col(k) - test.Y.col(k)).squaredNorm();
  }

  std::vector<double> rmse, rmse_mean, aucs;
  const Matrix prob = conditional_mean(test.X, state.B, state.Omega, test.kinds);
  for (Eigen::Index k = 0; k < q; ++k) {
    if (n == 0) break;
    if (test.kinds[static_cast<std::size_t>(k)] == OutcomeKind::Continuous) {
      rmse.push_back(std::sqrt(sq_err(k) / static_cast<double>(n * prediction_draws)));
      rmse_mean.push_back(std::sqrt((mean.col(k) - test.Y.col(k)).squaredNorm() /
                                    static_cast<double>(n)));
    } else {
      const Vector scores = prob.col(k);
      const Vector labels = test.Y.col(k);
      if (auto a = auc(std::span<const double>(scores.data(), static_cast<std::size_t>(n)),
                       std::span<const double>(labels.data(), static_cast<std::size_t>(n))))
        aucs.push_back(*a);
    }
  }
  return {mean_of_present(rmse), mean_of_present(rmse_mean), mean_of_present(aucs)};
}

double screening_level(double c, Eigen::Index n, Eigen::Index p) {
  if (!(c > 0.0) || n < 2 || p < 2) throw ParameterError("screening_level: need c > 0, n >= 2, p >= 2");
  const double pd = static_cast<double>(p);
  return std::sqrt(c * c * std::log(pd) / (static_cast<double>(n) * pd * pd));
}

SupportPattern sure_screen(const Matrix& B, const Matrix& Omega, Eigen::Index n,
                           Eigen::Index p, double c) {
  if (B.cols() != Omega.rows()) throw InputShapeError("sure_screen: B and Omega do not conform");
  const double a_n = screening_level(c, n, p);
  SupportPattern keep(B.rows(), B.cols());
  for (Eigen::Index k = 0; k < B.cols(); ++k)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      keep(j, k) = std::abs(B(j, k)) > a_n * Omega(k, k);
  return keep;
}

}  // namespace mixssl::metrics
