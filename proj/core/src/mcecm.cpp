#include "mixssl/mcecm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixssl/cm_beta.hpp"
#include "mixssl/cm_omega.hpp"
#include "mixssl/errors.hpp"
#include "mixssl/estep.hpp"
#include "mixssl/linalg.hpp"

namespace mixssl {

namespace {

double relative_change(const Matrix& updated, const Matrix& previous) {
  return (updated - previous).norm() / std::max(previous.norm(), 1.0);
}

std::string format_trace(const std::vector<IterationRecord>& trace) {
  std::ostringstream out;
  out << "iteration trace (iter, relB, relOmega, objective):";
  const std::size_t start = trace.size() > 10 ? trace.size() - 10 : 0;
  for (std::size_t t = start; t < trace.size(); ++t)
    out << "\n  " << trace[t].iteration << ", " << trace[t].rel_change_B << ", "
        << trace[t].rel_change_Omega << ", " << trace[t].objective;
  return out.str();
}

Eigen::Index upper_support(const Matrix& Omega) {
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < Omega.rows(); ++k)
    for (Eigen::Index l = k + 1; l < Omega.cols(); ++l)
      if (Omega(k, l) != 0.0) ++count;
  return count;
}

}  // namespace

int FitConfig::draws_at(int iteration) const {
  if (draw_schedule.empty()) return hyper.draws;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(std::max(iteration, 0)),
                                         draw_schedule.size() - 1);
  return draw_schedule[idx];
}

ModelState cold_start(const Dataset& data, const Hyperparameters& hyper) {
  ModelState s;
  s.B = Matrix::Zero(data.p(), data.q());
  s.Omega = Matrix::Identity(data.q(), data.q());
  s.theta = std::clamp(hyper.a_theta / (hyper.a_theta + hyper.b_theta), 1e-8, 1.0 - 1e-8);
  s.eta = std::clamp(hyper.a_eta / (hyper.a_eta + hyper.b_eta), 1e-8, 1.0 - 1e-8);
  return s;
}

double surrogate_objective(const ModelState& state, const Matrix& S, double n,
                           const Matrix& lambda_star, const Matrix& xi_star,
                           const Hyperparameters& hyper, double sum_p_star, double sum_q_star) {
  const auto factor = linalg::cholesky(linalg::symmetrize(state.Omega));
  if (!factor) return -std::numeric_limits<double>::infinity();
  const double pq = static_cast<double>(state.B.size());
  const double q = static_cast<double>(state.Omega.rows());
  const double pairs = q * (q - 1.0) / 2.0;
  double value = 0.5 * n * factor->log_det() - 0.5 * S.cwiseProduct(state.Omega).sum();
  value -= (lambda_star.array() * state.B.array().abs()).sum();
  for (Eigen::Index k = 0; k < state.Omega.rows(); ++k)
    for (Eigen::Index l = k + 1; l < state.Omega.cols(); ++l)
      value -= xi_star(k, l) * std::abs(state.Omega(k, l));
  value -= hyper.xi1 * state.Omega.trace();
  value += (hyper.a_theta - 1.0 + sum_p_star) * std::log(state.theta) +
           (hyper.b_theta - 1.0 + pq - sum_p_star) * std::log1p(-state.theta);
  value += (hyper.a_eta - 1.0 + sum_q_star) * std::log(state.eta) +
           (hyper.b_eta - 1.0 + pairs - sum_q_star) * std::log1p(-state.eta);
  return value;
}

FitResult fit_single(const Dataset& data, const FitConfig& config, const ModelState& init,
                     std::uint64_t grid_index, bool warm_start, IterationObserver* observer) {
  require_valid(data);
  if (!is_standardized(data.X, 1e-6))
    throw InputError("fit: covariate columns must be centered with norm sqrt(n)");
  config.hyper.validate();
  if (!(config.hyper.lambda0 >= config.hyper.lambda1) || !(config.hyper.xi0 >= config.hyper.xi1))
    throw ParameterError("fit: spike rates must not be below slab rates");
  if (init.B.rows() != data.p() || init.B.cols() != data.q() || init.Omega.rows() != data.q())
    throw InputShapeError("fit: initial state does not match the data dimensions");

  const auto& hyper = config.hyper;
  const auto& conv = config.convergence;
  const double n = static_cast<double>(data.n());
  const bool sampled = data.has_binary();

  SamplerDiagnostics diagnostics;
  FitResult result;
  result.state = init;
  int streak = 0;
  for (int t = 1; t <= conv.max_outer; ++t) {
    const int H = sampled ? config.draws_at(t - 1) : 1;
    const ModelState& prev = result.state;

    LatentDraws latent = sample_latents(data, prev, H,
                                        SeedKey{config.seed, grid_index, static_cast<std::uint64_t>(t)},
                                        config.sampler, config.threads, &diagnostics);
    const PenaltyState penalties = update_penalties(prev, hyper);

    const BetaStepResult beta = cm_step_beta(data.X, latent, prev, penalties, hyper);
    const SurrogateStats stats = residual_stats(data.X, beta.B, latent, config.threads);

    PenalizedGLassoProblem problem{stats.S, n, hyper.xi1, penalties.xi_star};
    GLassoResult omega = solve_penalized_glasso(problem, prev.Omega);

    ModelState next{beta.B, std::move(omega.Omega), beta.theta,
                    update_eta(penalties.sum_q_star(), hyper.a_eta, hyper.b_eta, data.q())};

    IterationRecord record;
    record.iteration = t;
    record.draws = H;
    record.beta_sweeps = beta.sweeps;
    record.objective = surrogate_objective(next, stats.S, n, penalties.lambda_star,
                                           penalties.xi_star, hyper, penalties.sum_p_star(),
                                           penalties.sum_q_star());

    enforce_binary_unit_variance(next, data.kinds, &latent);

    record.rel_change_B = relative_change(next.B, prev.B);
    record.rel_change_Omega = relative_change(next.Omega, prev.Omega);
    result.trace.push_back(record);
    if (!std::isfinite(record.objective) || !next.B.allFinite() || !next.Omega.allFinite())
      throw DivergenceError("fit diverged at iteration " + std::to_string(t) + "\n" +
                            format_trace(result.trace));

    result.state = std::move(next);
    result.iterations = t;
    result.objective = record.objective;
    result.draws_last = H;
    if (observer) observer->on_iteration(record, result.state, latent);

    streak = std::max(record.rel_change_B, record.rel_change_Omega) < conv.rel_tol ? streak + 1 : 0;
    if (streak >= conv.streak && (warm_start || t >= conv.min_outer)) {
      result.converged = true;
      break;
    }
  }
  result.sampler_fallbacks = diagnostics.empty_arc_fallbacks.load();
  return result;
}

std::vector<GridPoint> ladder(const Hyperparameters& hyper) {
  const std::vector<double> lambdas =
      hyper.lambda0_grid.empty() ? std::vector<double>{hyper.lambda0} : hyper.lambda0_grid;
  const std::vector<double> xis =
      hyper.xi0_grid.empty() ? std::vector<double>{hyper.xi0} : hyper.xi0_grid;
  std::vector<GridPoint> grid;
  grid.reserve(lambdas.size() * xis.size());
  for (double xi0 : xis)
    for (double lambda0 : lambdas) grid.push_back({lambda0, xi0});
  return grid;
}

PathResult fit_path(const Dataset& data, const FitConfig& config) {
  config.hyper.validate();
  PathResult path;
  path.grid = ladder(config.hyper);
  ModelState state = cold_start(data, config.hyper);
  for (std::size_t g = 0; g < path.grid.size(); ++g) {
    FitConfig point = config;
    point.hyper.lambda0 = path.grid[g].lambda0;
    point.hyper.xi0 = path.grid[g].xi0;
    FitResult fit;
    try {
      fit = fit_single(data, point, state, g, g > 0);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "grid point " << g << " (lambda0=" << path.grid[g].lambda0
          << ", xi0=" << path.grid[g].xi0 << "): " << e.what();
      throw NumericalError(msg.str());
    }
    state = fit.state;
    GridDiagnostics diag;
    diag.iterations = fit.iterations;
    diag.converged = fit.converged;
    diag.objective = fit.objective;
    diag.support_B = (fit.state.B.array() != 0.0).count();
    diag.support_Omega = upper_support(fit.state.Omega);
    diag.draws = fit.draws_last;
    path.estimates.push_back(fit.state);
    path.diagnostics.push_back(diag);
  }
  return path;
}

}  // namespace mixssl
