#pragma once

#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "mixssl/core_types.hpp"
#include "mixssl/linalg.hpp"
#include "mixssl/rng.hpp"

namespace mixssl {

/// Sign pattern of an orthant: s_k = +1 requires z_k >= 0, s_k = -1
/// requires z_k < 0.
struct OrthantConstraint {
  std::vector<int> signs;

  static OrthantConstraint from_binary_outcomes(std::span<const double> y_binary);
  bool satisfied_by(const Vector& z) const;
};

/// Gaussian N(mean, precision^{-1}) with the precision's Cholesky factor
/// cached for sampling.
struct ConditionalGaussian {
  Vector mean;
  Matrix precision;
  linalg::CholeskyFactor precision_factor;

  static ConditionalGaussian make(Vector mean, Matrix precision);
  Eigen::Index dim() const { return mean.size(); }
  /// One draw from N(0, precision^{-1}).
  Vector draw_centered(Engine& rng) const;
};

/// Conditional of the binary block given the observed continuous block:
///   m_{B|C} = m_B - Omega_BB^{-1} Omega_BC (y_C - m_C),   precision Omega_BB.
/// Assumes the canonical layout, the first q_c coordinates being continuous.
ConditionalGaussian conditional_of_binary_block(const Vector& mean, const Matrix& Omega,
                                                const Vector& y_continuous);

/// A finite union of disjoint closed arcs inside [0, 2*pi].
class ArcSet {
 public:
  using Interval = std::pair<double, double>;
  using Intervals = boost::container::small_vector<Interval, 4>;

  static ArcSet full();
  static ArcSet empty();
  static ArcSet from_intervals(std::vector<Interval> intervals);

  ArcSet intersect(const ArcSet& other) const;
  ArcSet unite(const ArcSet& other) const;
  bool contains(double angle, double tol = 0.0) const;
  double measure() const;
  bool is_empty() const { return intervals_.empty(); }
  const Intervals& intervals() const { return intervals_; }

  /// Maps u in [0, 1) to the point at fraction u of the total arc length.
  double at_fraction(double u) const;

 private:
  /// Adopts intervals already sorted, disjoint, and inside [0, 2*pi].
  static ArcSet from_sorted(Intervals intervals);

  friend ArcSet ellipse_arc_intersection(double, double, double, int, double);

  Intervals intervals_;
};

/// Angles theta in [0, 2*pi) with
///   sign * (amp_cos * cos(theta) + amp_sin * sin(theta) + center) >= 0.
/// The result is one arc, split in two when it wraps through zero.
ArcSet ellipse_arc_intersection(double center, double amp_cos, double amp_sin, int sign,
                                double endpoint_tol = 1e-12);

struct SamplerDiagnostics {
  std::atomic<std::uint64_t> empty_arc_fallbacks{0};
  std::atomic<std::uint64_t> steps{0};
};

/// One elliptical slice sampling transition for N(g.mean, g.precision^{-1})
/// restricted to the orthant. The feasible angles are computed exactly, so
/// every step accepts; the returned point satisfies the sign test exactly.
Vector liness_step(const Vector& current, const ConditionalGaussian& g,
                   const OrthantConstraint& c, Engine& rng,
                   SamplerDiagnostics* diagnostics = nullptr);

struct SamplerConfig {
  int burn_in = 50;
  int thin = 1;
};

/// Identifies the E-step being sampled; the per-observation chain seed is
/// derive_seed(global_seed, {grid_index, iteration, i}).
struct SeedKey {
  std::uint64_t global_seed = 0;
  std::uint64_t grid_index = 0;
  std::uint64_t iteration = 0;
};

/// H completions of the latent matrix. Continuous columns equal Y; binary
/// columns are LinESS draws from the truncated conditional of each row.
/// With no binary outcomes, returns a single draw equal to Y.
/// Output is bit-identical for any thread count.
LatentDraws sample_latents(const Dataset& data, const ModelState& state, int draws,
                           const SeedKey& key, const SamplerConfig& config = {},
                           int threads = 1, SamplerDiagnostics* diagnostics = nullptr);

}  // namespace mixssl
