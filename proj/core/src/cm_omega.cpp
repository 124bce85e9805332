#include "mixssl/cm_omega.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixssl/errors.hpp"
#include "mixssl/linalg.hpp"

namespace mixssl {

namespace {

constexpr double kClip = 1e-8;

double soft(double x, double t) {
  const double m = std::abs(x) - t;
  return m > 0.0 ? std::copysign(m, x) : 0.0;
}

double pair_penalty(const Matrix& xi_star, Eigen::Index k, Eigen::Index l) {
  return k < l ? xi_star(k, l) : xi_star(l, k);
}

// Coordinate descent for  min 1/2 b^T W11 b - s^T b + sum_l rho_l |b_l|
// over the coordinates other than `skip`. `b` is warm and updated in place.
void lasso_column(const Matrix& W, const Vector& s, const Vector& rho, Eigen::Index skip,
                  Vector& b, int max_sweeps, double tol) {
  const Eigen::Index q = W.rows();
  Vector wb = Vector::Zero(q);  // W11 b
  for (Eigen::Index l = 0; l < q; ++l) {
    if (l == skip || b(l) == 0.0) continue;
    for (Eigen::Index m = 0; m < q; ++m)
      if (m != skip) wb(m) += W(m, l) * b(l);
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index l = 0; l < q; ++l) {
      if (l == skip) continue;
      const double partial = s(l) - (wb(l) - W(l, l) * b(l));
      const double updated = soft(partial, rho(l)) / W(l, l);
      const double change = updated - b(l);
      if (change != 0.0) {
        for (Eigen::Index m = 0; m < q; ++m)
          if (m != skip) wb(m) += W(m, l) * change;
        b(l) = updated;
        max_change = std::max(max_change, std::abs(change) * W(l, l));
      }
    }
    if (max_change < tol) break;
  }
}

}  // namespace

double PenalizedGLassoProblem::objective(const Matrix& Omega) const {
  auto factor = linalg::cholesky(linalg::symmetrize(Omega));
  if (!factor) return -std::numeric_limits<double>::infinity();
  double value = 0.5 * n * factor->log_det() - 0.5 * (S.cwiseProduct(Omega)).sum() -
                 xi1 * Omega.trace();
  for (Eigen::Index k = 0; k < Omega.rows(); ++k)
    for (Eigen::Index l = k + 1; l < Omega.cols(); ++l) {
      const double w = Omega(k, l);
      if (w != 0.0) value -= xi_star(k, l) * std::abs(w);
    }
  return value;
}

GLassoResult solve_penalized_glasso(const PenalizedGLassoProblem& problem, const Matrix& warm,
                                    const GLassoOptions& options) {
  const Eigen::Index q = problem.S.rows();
  if (problem.S.cols() != q || warm.rows() != q || warm.cols() != q ||
      problem.xi_star.rows() != q || problem.xi_star.cols() != q)
    throw InputShapeError("solve_penalized_glasso: dimension mismatch");
  if (!(problem.n > 0.0) || !(problem.xi1 > 0.0))
    throw ParameterError("solve_penalized_glasso: n and xi1 must be positive");
  if (!linalg::is_positive_definite(linalg::symmetrize(warm)))
    throw ConditioningError("solve_penalized_glasso: warm start is not positive definite");

  // Divide the objective by n/2: log|Omega| - tr(S_hat Omega) - sum_{k != l} rho_kl |omega_kl|
  // with S_hat = (S + 2 xi1 I) / n and rho_kl = xi*_kl / n.
  Matrix s_hat = linalg::symmetrize(problem.S) / problem.n;
  s_hat.diagonal().array() += 2.0 * problem.xi1 / problem.n;

  GLassoResult result;
  if (q == 1) {
    result.Omega = Matrix::Constant(1, 1, 1.0 / s_hat(0, 0));
    result.converged = true;
    return result;
  }

  Matrix W = s_hat;
  Matrix beta(q, q);  // column j: regression of j on the others
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index l = 0; l < q; ++l) beta(l, j) = l == j ? 0.0 : -warm(l, j) / warm(j, j);
  }
  Matrix rho(q, q);
  for (Eigen::Index k = 0; k < q; ++k)
    for (Eigen::Index l = 0; l < q; ++l)
      rho(k, l) = k == l ? 0.0 : pair_penalty(problem.xi_star, k, l) / problem.n;

  const double scale = s_hat.diagonal().cwiseAbs().mean();
  const double tol = options.tol * scale;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
      Vector b = beta.col(j);
      lasso_column(W, s_hat.col(j), rho.col(j), j, b, options.inner_max_sweeps, tol * 1e-2);
      beta.col(j) = b;
      for (Eigen::Index m = 0; m < q; ++m) {
        if (m == j) continue;
        double w = 0.0;
        for (Eigen::Index l = 0; l < q; ++l)
          if (l != j) w += W(m, l) * b(l);
        max_change = std::max(max_change, std::abs(w - W(m, j)));
        W(m, j) = w;
        W(j, m) = w;
      }
    }
    result.sweeps = sweep;
    if (max_change < tol) {
      result.converged = true;
      break;
    }
  }

  Matrix omega(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    double fitted = 0.0;
    for (Eigen::Index l = 0; l < q; ++l)
      if (l != j) fitted += W(l, j) * beta(l, j);
    const double diag = 1.0 / (W(j, j) - fitted);
    omega(j, j) = diag;
    for (Eigen::Index l = 0; l < q; ++l)
      if (l != j) omega(l, j) = -beta(l, j) * diag;
  }
  for (Eigen::Index k = 0; k < q; ++k) {
    for (Eigen::Index l = k + 1; l < q; ++l) {
      const double v = (omega(k, l) == 0.0 || omega(l, k) == 0.0)
                           ? 0.0
                           : 0.5 * (omega(k, l) + omega(l, k));
      omega(k, l) = v;
      omega(l, k) = v;
    }
  }

  const double warm_objective = problem.objective(warm);
  const double slack = 1e-10 * std::max(1.0, std::abs(warm_objective));
  if (omega.allFinite() && problem.objective(omega) >= warm_objective - slack) {
    result.Omega = std::move(omega);
    return result;
  }

  // Pull back toward the (positive-definite) warm start until PD and no worse.
  result.line_search_used = true;
  const Matrix warm_sym = linalg::symmetrize(warm);
  const Matrix direction = omega.allFinite() ? Matrix(omega - warm_sym) : Matrix::Zero(q, q);
  double step = 0.5;
  for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
    Matrix candidate = warm_sym + step * direction;
    if (problem.objective(candidate) >= warm_objective - slack) {
      result.Omega = std::move(candidate);
      return result;
    }
  }
  result.Omega = warm_sym;
  return result;
}

KktReport glasso_kkt(const PenalizedGLassoProblem& problem, const Matrix& Omega, double tol) {
  const Matrix G = 0.5 * problem.n * linalg::pd_inverse(linalg::symmetrize(Omega)) -
                   0.5 * linalg::symmetrize(problem.S);
  KktReport report;
  const Eigen::Index q = Omega.rows();
  for (Eigen::Index k = 0; k < q; ++k) {
    report.max_violation = std::max(report.max_violation, std::abs(G(k, k) - problem.xi1));
    for (Eigen::Index l = k + 1; l < q; ++l) {
      // Each pair is penalized once, so the subgradient of the penalty with
      // respect to the shared entry splits evenly between (k,l) and (l,k).
      const double half_pen = 0.5 * problem.xi_star(k, l);
      const double w = Omega(k, l);
      const double v = w != 0.0 ? std::abs(G(k, l) - std::copysign(half_pen, w))
                                 : std::max(0.0, std::abs(G(k, l)) - half_pen);
      report.max_violation = std::max(report.max_violation, v);
    }
  }
  report.ok = report.max_violation <= tol;
  return report;
}

double update_eta(double sum_q_star, double a_eta, double b_eta, Eigen::Index q) {
  const double pairs = static_cast<double>(q) * static_cast<double>(q - 1) / 2.0;
  const double value = (a_eta - 1.0 + sum_q_star) / (a_eta + b_eta - 2.0 + pairs);
  if (!std::isfinite(value)) return 0.5;
  return std::clamp(value, kClip, 1.0 - kClip);
}

void enforce_binary_unit_variance(ModelState& state, const std::vector<OutcomeKind>& kinds,
                                  LatentDraws* latent) {
  const auto q = static_cast<Eigen::Index>(kinds.size());
  if (state.Omega.rows() != q || state.B.cols() != q)
    throw InputShapeError("enforce_binary_unit_variance: dimension mismatch");
  if (std::none_of(kinds.begin(), kinds.end(),
                   [](OutcomeKind k) { return k == OutcomeKind::Binary; }))
    return;
  const Matrix sigma = linalg::pd_inverse(linalg::symmetrize(state.Omega));
  Vector d = Vector::Ones(q);
  for (Eigen::Index k = 0; k < q; ++k)
    if (kinds[k] == OutcomeKind::Binary) d(k) = std::sqrt(sigma(k, k));

  // (D^{-1} Sigma D^{-1})^{-1} = D Omega D.
  state.Omega = linalg::symmetrize(d.asDiagonal() * state.Omega * d.asDiagonal());
  for (Eigen::Index k = 0; k < q; ++k) {
    if (d(k) == 1.0) continue;
    state.B.col(k) /= d(k);
    if (latent)
      for (auto& z : latent->draws) z.col(k) /= d(k);
  }
}

}  // namespace mixssl
