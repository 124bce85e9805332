#pragma once

#include "mixssl/core_types.hpp"
#include "mixssl/estep.hpp"

namespace mixssl {

/// maximize  (n/2) log|Omega| - 1/2 tr(S Omega) - xi1 sum_k omega_kk
///           - sum_{k<k'} xi*_kk' |omega_kk'|      over Omega > 0.
struct PenalizedGLassoProblem {
  Matrix S;        // q x q, symmetric PSD
  double n = 1.0;
  double xi1 = 1.0;
  Matrix xi_star;  // q x q, strict upper triangle read

  double objective(const Matrix& Omega) const;
};

struct GLassoOptions {
  int max_sweeps = 10000;
  double tol = 1e-12;           // relative change in the covariance iterate
  int inner_max_sweeps = 10000;
};

struct GLassoResult {
  Matrix Omega;
  int sweeps = 0;
  bool converged = false;
  bool line_search_used = false;
};

/// Block coordinate-descent graphical lasso with entry-wise penalties and
/// a positive-definiteness line search back toward the warm start.
GLassoResult solve_penalized_glasso(const PenalizedGLassoProblem& problem, const Matrix& warm,
                                    const GLassoOptions& options = {});

struct KktReport {
  double max_violation = 0.0;
  bool ok = false;
};

/// Subgradient conditions with G = (n/2) Omega^{-1} - S/2.
KktReport glasso_kkt(const PenalizedGLassoProblem& problem, const Matrix& Omega, double tol);

double update_eta(double sum_q_star, double a_eta, double b_eta, Eigen::Index q);

/// Rescales the latent scale so that (Omega^{-1})_kk = 1 on binary
/// coordinates: Sigma' = D^{-1} Sigma D^{-1}, B <- B D^{-1}, Z <- Z D^{-1}.
/// Signs of every latent coordinate are preserved.
void enforce_binary_unit_variance(ModelState& state, const std::vector<OutcomeKind>& kinds,
                                  LatentDraws* latent = nullptr);

}  // namespace mixssl
