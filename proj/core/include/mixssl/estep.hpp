#pragma once

#include "mixssl/core_types.hpp"

namespace mixssl {

/// Entry-wise slab probabilities and the effective penalties they induce.
/// q_star and xi_star are meaningful on the strict upper triangle only;
/// other entries are zero.
struct PenaltyState {
  Matrix p_star;       // p x q
  Matrix q_star;       // q x q
  Matrix lambda_star;  // p x q
  Matrix xi_star;      // q x q

  double sum_p_star() const { return p_star.sum(); }
  double sum_q_star() const;
};

/// Monte Carlo residual cross-product S = (1/H) sum_h (Z_h - XB)^T (Z_h - XB).
struct SurrogateStats {
  Matrix S;
  Eigen::Index draws = 1;
};

/// Posterior probability that an entry with the given value came from the
/// slab: [1 + (1-mix)/mix * (rate_spike/rate_slab) * exp(-(rate_spike -
/// rate_slab)|value|)]^{-1}. Evaluated in log-odds space.
double slab_probability(double value, double rate_slab, double rate_spike, double mix);

/// Effective penalty blending slab and spike rates with weight p_slab.
inline double mixed_penalty(double p_slab, double rate_slab, double rate_spike) {
  return rate_slab * p_slab + rate_spike * (1.0 - p_slab);
}

PenaltyState update_penalties(const ModelState& state, const Hyperparameters& hyper);

/// Streams over the draws without forming the stacked (nH) x q matrix.
/// Per-draw products are combined by a fixed-shape tree sum, so the result
/// does not depend on `threads`.
SurrogateStats residual_stats(const Matrix& X, const Matrix& B, const LatentDraws& latent,
                              int threads = 1);

}  // namespace mixssl
