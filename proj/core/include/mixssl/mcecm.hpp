#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixssl/core_types.hpp"
#include "mixssl/truncnorm.hpp"

namespace mixssl {

struct ConvergenceCriteria {
  int max_outer = 100;
  double rel_tol = 1e-3;
  int min_outer = 5;     // applied to cold starts only
  int streak = 3;        // consecutive iterations below rel_tol
};

struct FitConfig {
  Hyperparameters hyper;
  std::uint64_t seed = 0;
  ConvergenceCriteria convergence;
  std::vector<int> draw_schedule;  // optional; overrides hyper.draws per outer iteration
  SamplerConfig sampler;
  int threads = 1;

  int draws_at(int iteration) const;
};

struct IterationRecord {
  int iteration = 0;
  double rel_change_B = 0.0;
  double rel_change_Omega = 0.0;
  double objective = 0.0;
  int beta_sweeps = 0;
  int draws = 0;
};

struct FitResult {
  ModelState state;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  int draws_last = 0;
  std::uint64_t sampler_fallbacks = 0;
  std::vector<IterationRecord> trace;
};

/// Observer called after every outer iteration with the rescaled state and
/// the rescaled latent draws of that iteration.
struct IterationObserver {
  virtual ~IterationObserver() = default;
  virtual void on_iteration(const IterationRecord& record, const ModelState& state,
                            const LatentDraws& latent) = 0;
};

/// Initial state: B = 0, Omega = I, theta and eta at their prior means.
ModelState cold_start(const Dataset& data, const Hyperparameters& hyper);

/// Monte Carlo ECM at the fixed (lambda0, xi0) in config.hyper. Each outer
/// iteration samples fresh latents, refreshes penalties, runs CM step 1,
/// recomputes residual statistics at the new B, runs CM step 2, and rescales
/// binary latent variances to one.
FitResult fit_single(const Dataset& data, const FitConfig& config, const ModelState& init,
                     std::uint64_t grid_index = 0, bool warm_start = false,
                     IterationObserver* observer = nullptr);

struct GridPoint {
  double lambda0 = 0.0;
  double xi0 = 0.0;
};

struct GridDiagnostics {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  Eigen::Index support_B = 0;
  Eigen::Index support_Omega = 0;  // strict upper triangle
  int draws = 0;
};

struct PathResult {
  std::vector<GridPoint> grid;
  std::vector<ModelState> estimates;
  std::vector<GridDiagnostics> diagnostics;

  /// The last, spikiest grid point.
  const ModelState& point_estimate() const { return estimates.back(); }
};

/// Ladder order: xi0 ascending in the outer loop, lambda0 ascending inside.
std::vector<GridPoint> ladder(const Hyperparameters& hyper);

/// Runs fit_single along the ladder, warm-starting each point from its
/// predecessor.
PathResult fit_path(const Dataset& data, const FitConfig& config);

/// Surrogate objective at the given state, statistics, and penalties
/// (constants in the latent draws dropped).
double surrogate_objective(const ModelState& state, const Matrix& S, double n,
                           const Matrix& lambda_star, const Matrix& xi_star,
                           const Hyperparameters& hyper, double sum_p_star, double sum_q_star);

}  // namespace mixssl
