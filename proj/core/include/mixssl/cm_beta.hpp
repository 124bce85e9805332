#pragma once

#include "mixssl/core_types.hpp"
#include "mixssl/estep.hpp"

namespace mixssl {

/// Soft/hard thresholded coordinate update
///   beta = [|score| - penalty]_+ sign(score) / scale * 1(|score / scale| > delta),
/// with scale = n H omega_kk (here: squared column norm times omega_kk).
double update_beta_entry(double score, double penalty, double delta, double scale);

/// Hard-threshold level for one column of B. With d = scale, p0 the slab
/// probability at zero and L0 = lambda1 p0 + lambda0 (1 - p0):
///   (L0 - lambda1)^2 > 2 d log(1/p0)  ->  (sqrt(2 d log(1/p0)) + lambda1) / d
///   otherwise                         ->  L0 / d
double threshold_delta(double lambda1, double lambda0, double theta, double scale);

double update_theta(double sum_p_star, double a_theta, double b_theta, Eigen::Index entries);

/// Residual bookkeeping for cyclic coordinate ascent over B. Holds the
/// Monte Carlo mean residual R = Zbar - XB and its precision-weighted image
/// W = R * Omega, both updated by rank-one corrections.
class BetaWorkspace {
 public:
  BetaWorkspace(const Matrix& X, const Matrix& Zbar, const Matrix& B, const Matrix& Omega);

  /// Precision-weighted inner product of x_j with the residuals that leave
  /// out beta_jk only:  sum_i x_ij sum_k' omega_kk' r_ik'^{(-jk)}.
  double score(Eigen::Index j, Eigen::Index k) const;

  /// Sets beta_jk and updates residuals.
  void set(Eigen::Index j, Eigen::Index k, double value);

  void recompute();
  /// Max abs deviation between the running residuals and a fresh recomputation.
  double residual_drift() const;

  const Matrix& B() const { return B_; }
  const Matrix& residuals() const { return R_; }
  double column_norm2(Eigen::Index j) const { return norm2_(j); }
  double omega(Eigen::Index k, Eigen::Index l) const { return Omega_(k, l); }

 private:
  const Matrix& X_;
  const Matrix& Zbar_;
  const Matrix& Omega_;
  Matrix B_;
  Matrix R_;
  Matrix W_;
  Vector norm2_;
};

struct BetaStepResult {
  Matrix B;
  double theta = 0.5;
  int sweeps = 0;
  bool converged = false;
  bool gate_applied = false;  // some soft-threshold survivor was hard-gated to zero
};

/// CM objective for B with the effective penalties held fixed:
///   -1/2 tr((Zbar - XB)^T (Zbar - XB) Omega) - sum lambda*_jk |beta_jk|.
double beta_objective(const Matrix& X, const Matrix& Zbar, const Matrix& B, const Matrix& Omega,
                      const Matrix& lambda_star);

/// CM step 1: cyclic coordinate ascent (column-major over (j, k)) until the
/// largest coefficient change in a sweep falls below hyper.tol, followed by
/// the closed-form theta update.
BetaStepResult cm_step_beta(const Matrix& X, const LatentDraws& latent, const ModelState& state,
                            const PenaltyState& penalties, const Hyperparameters& hyper);

/// Same, given the Monte Carlo mean of the latent draws.
BetaStepResult cm_step_beta_mean(const Matrix& X, const Matrix& Zbar, const ModelState& state,
                                 const PenaltyState& penalties, const Hyperparameters& hyper);

}  // namespace mixssl
