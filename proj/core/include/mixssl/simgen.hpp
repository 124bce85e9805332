#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mixssl/core_types.hpp"

namespace mixssl::sim {

enum class OmegaStructure { AR1, AR2, BlockDiagonal, StarGraph, SmallWorld, TreeNetwork };

const std::vector<OmegaStructure>& all_structures();
std::string to_string(OmegaStructure s);
/// Accepts ar1, ar2, block, star, small-world, tree; throws ParameterError
/// listing the valid names otherwise.
OmegaStructure parse_structure(const std::string& name);

enum class SignalKind { Uniform, Disjoint };

struct SignalRegime {
  SignalKind kind = SignalKind::Uniform;
  double density = 0.3;

  static SignalRegime uniform(double density = 0.3) { return {SignalKind::Uniform, density}; }
  static SignalRegime disjoint(double density = 0.3) { return {SignalKind::Disjoint, density}; }
};

std::string to_string(SignalKind k);
SignalKind parse_signal(const std::string& name);

using Edge = std::pair<int, int>;

/// Ring lattice with one neighbour per side, each edge rewired with the
/// given probability (Watts-Strogatz, single community).
std::vector<Edge> watts_strogatz(int q, double rewire_prob, std::uint64_t seed);

/// Uniform spanning tree of the complete graph K_q via loop-erased random
/// walks (Wilson's algorithm).
std::vector<Edge> wilson_tree(int q, std::uint64_t seed);

/// Precision with off-diagonal support exactly on `edges`: weights uniform
/// on +-[0.2, 0.5], diagonal 1 + sum |weights| + 0.1.
Matrix graph_precision(int q, const std::vector<Edge>& edges, std::uint64_t seed);

Matrix ar1_covariance(int q, double rho = 0.7);

Matrix gen_omega(OmegaStructure structure, int q, std::uint64_t seed,
                 double rewire_prob = 0.1);

Matrix gen_coefficients(const SignalRegime& regime, int p, int q, std::uint64_t seed);

/// Rows i.i.d. N_p(0, Gamma) with Gamma_jj' = 0.5^|j-j'|.
Matrix gen_covariates(int n, int p, std::uint64_t seed);

/// Z = XB + E with rows of E ~ N(0, Omega^{-1}); Y = g(Z) row-wise.
/// Y and kinds are in canonical order.
Matrix simulate_outcomes(const Matrix& X, const Matrix& B, const Matrix& Omega,
                         const std::vector<OutcomeKind>& kinds, std::uint64_t seed);

/// Same draw, returning the latent matrix as well.
std::pair<Matrix, Matrix> simulate_latent_and_outcomes(const Matrix& X, const Matrix& B,
                                                       const Matrix& Omega,
                                                       const std::vector<OutcomeKind>& kinds,
                                                       std::uint64_t seed);

/// q_c continuous then q_b binary.
std::vector<OutcomeKind> mixed_kinds(int q_continuous, int q_binary);

/// True when some binary coordinate of Omega^{-1} has a non-unit diagonal.
bool binary_variance_mismatch(const Matrix& Omega, const std::vector<OutcomeKind>& kinds,
                              double tol = 1e-8);

}  // namespace mixssl::sim
