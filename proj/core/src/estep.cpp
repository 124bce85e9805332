#include "mixssl/estep.hpp"

#include <cmath>

#include "mixssl/errors.hpp"
#include "mixssl/linalg.hpp"
#include "mixssl/parallel.hpp"

namespace mixssl {

double PenaltyState::sum_q_star() const {
  double total = 0.0;
  for (Eigen::Index k = 0; k < q_star.rows(); ++k)
    for (Eigen::Index l = k + 1; l < q_star.cols(); ++l) total += q_star(k, l);
  return total;
}

double slab_probability(double value, double rate_slab, double rate_spike, double mix) {
  if (!(mix > 0.0 && mix < 1.0)) throw ParameterError("slab_probability: mixing weight must lie in (0,1)");
  if (!(rate_slab > 0.0) || !(rate_spike >= rate_slab))
    throw ParameterError("slab_probability: need 0 < slab rate <= spike rate");
  double log_odds = std::log(mix) - std::log1p(-mix) + std::log(rate_slab) - std::log(rate_spike);
  const double gap = rate_spike - rate_slab;
  if (gap > 0.0) log_odds += gap * std::abs(value);
  if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

PenaltyState update_penalties(const ModelState& state, const Hyperparameters& hyper) {
  const Eigen::Index p = state.B.rows();
  const Eigen::Index q = state.B.cols();
  PenaltyState out;
  out.p_star.resize(p, q);
  out.lambda_star.resize(p, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double ps = slab_probability(state.B(j, k), hyper.lambda1, hyper.lambda0, state.theta);
      out.p_star(j, k) = ps;
      out.lambda_star(j, k) = mixed_penalty(ps, hyper.lambda1, hyper.lambda0);
    }
  }
  out.q_star = Matrix::Zero(q, q);
  out.xi_star = Matrix::Zero(q, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    for (Eigen::Index l = k + 1; l < q; ++l) {
      const double qs = slab_probability(state.Omega(k, l), hyper.xi1, hyper.xi0, state.eta);
      out.q_star(k, l) = qs;
      out.xi_star(k, l) = mixed_penalty(qs, hyper.xi1, hyper.xi0);
    }
  }
  return out;
}

SurrogateStats residual_stats(const Matrix& X, const Matrix& B, const LatentDraws& latent,
                              int threads) {
  if (latent.draws.empty()) throw InputShapeError("residual_stats: no latent draws");
  if (X.cols() != B.rows()) throw InputShapeError("residual_stats: X and B do not conform");
  const Matrix fitted = X * B;
  for (const auto& z : latent.draws)
    if (z.rows() != fitted.rows() || z.cols() != fitted.cols())
      throw InputShapeError("residual_stats: draw shape does not match XB");

  std::vector<Matrix> terms(latent.draws.size());
  parallel_for(terms.size(), threads, [&](std::size_t h) {
    const Matrix m = latent.draws[h] - fitted;
    terms[h] = m.transpose() * m;
  });
  SurrogateStats out;
  out.draws = latent.count();
  out.S = linalg::symmetrize(linalg::tree_sum(terms) / static_cast<double>(terms.size()));
  return out;
}

}  // namespace mixssl
