#include "mixssl/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mixssl/errors.hpp"
#include "mixssl/linalg.hpp"
#include "mixssl/rng.hpp"

namespace mixssl::sim {

namespace {

struct StructureName {
  OmegaStructure structure;
  const char* name;
};

constexpr StructureName kStructureNames[] = {
    {OmegaStructure::AR1, "ar1"},         {OmegaStructure::AR2, "ar2"},
    {OmegaStructure::BlockDiagonal, "block"}, {OmegaStructure::StarGraph, "star"},
    {OmegaStructure::SmallWorld, "small-world"}, {OmegaStructure::TreeNetwork, "tree"},
};

std::string valid_structure_names() {
  std::string out;
  for (const auto& s : kStructureNames) {
    if (!out.empty()) out += ", ";
    out += s.name;
  }
  return out;
}

Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

const std::vector<OmegaStructure>& all_structures() {
  static const std::vector<OmegaStructure> all = {
      OmegaStructure::AR1,       OmegaStructure::AR2,        OmegaStructure::BlockDiagonal,
      OmegaStructure::StarGraph, OmegaStructure::SmallWorld, OmegaStructure::TreeNetwork};
  return all;
}

std::string to_string(OmegaStructure s) {
  for (const auto& entry : kStructureNames)
    if (entry.structure == s) return entry.name;
  return "unknown";
}

OmegaStructure parse_structure(const std::string& name) {
  for (const auto& entry : kStructureNames)
    if (name == entry.name) return entry.structure;
  throw ParameterError("unknown structure '" + name + "'; valid names: " + valid_structure_names());
}

std::string to_string(SignalKind k) { return k == SignalKind::Uniform ? "uniform" : "disjoint"; }

SignalKind parse_signal(const std::string& name) {
  if (name == "uniform") return SignalKind::Uniform;
  if (name == "disjoint") return SignalKind::Disjoint;
  throw ParameterError("unknown signal regime '" + name + "'; valid names: uniform, disjoint");
}

std::vector<Edge> watts_strogatz(int q, double rewire_prob, std::uint64_t seed) {
  if (q < 2) throw ParameterError("watts_strogatz: need q >= 2");
  std::set<Edge> edges;
  for (int i = 0; i < q; ++i) edges.insert(ordered(i, (i + 1) % q));
  if (q < 4) return {edges.begin(), edges.end()};

  Engine rng = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < q; ++i) {
    const Edge lattice = ordered(i, (i + 1) % q);
    if (unit(rng) >= rewire_prob || !edges.contains(lattice)) continue;
    std::vector<int> candidates;
    for (int v = 0; v < q; ++v)
      if (v != i && !edges.contains(ordered(i, v))) candidates.push_back(v);
    if (candidates.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    edges.erase(lattice);
    edges.insert(ordered(i, candidates[pick(rng)]));
  }
  return {edges.begin(), edges.end()};
}

std::vector<Edge> wilson_tree(int q, std::uint64_t seed) {
  if (q < 2) throw ParameterError("wilson_tree: need q >= 2");
  Engine rng = make_engine(seed);
  std::uniform_int_distribution<int> vertex(0, q - 1);
  std::uniform_int_distribution<int> other(0, q - 2);
  std::vector<bool> in_tree(static_cast<std::size_t>(q), false);
  std::vector<int> next(static_cast<std::size_t>(q), -1);
  in_tree[static_cast<std::size_t>(vertex(rng))] = true;

  std::vector<Edge> edges;
  for (int start = 0; start < q; ++start) {
    // Random walk on K_q; overwriting next[] erases loops.
    int u = start;
    while (!in_tree[static_cast<std::size_t>(u)]) {
      int v = other(rng);
      if (v >= u) ++v;
      next[static_cast<std::size_t>(u)] = v;
      u = v;
    }
    u = start;
    while (!in_tree[static_cast<std::size_t>(u)]) {
      in_tree[static_cast<std::size_t>(u)] = true;
      edges.push_back(ordered(u, next[static_cast<std::size_t>(u)]));
      u = next[static_cast<std::size_t>(u)];
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

Matrix graph_precision(int q, const std::vector<Edge>& edges, std::uint64_t seed) {
  Engine rng = make_engine(seed);
  std::uniform_real_distribution<double> magnitude(0.2, 0.5);
  std::bernoulli_distribution negative(0.5);
  Matrix omega = Matrix::Zero(q, q);
  for (const auto& [a, b] : edges) {
    const double m = magnitude(rng);
    const double w = negative(rng) ? -m : m;
    omega(a, b) = w;
    omega(b, a) = w;
  }
  for (int k = 0; k < q; ++k) omega(k, k) = 1.0 + omega.row(k).cwiseAbs().sum() + 0.1;
  return omega;
}

Matrix ar1_covariance(int q, double rho) {
  Matrix sigma(q, q);
  for (int k = 0; k < q; ++k)
    for (int l = 0; l < q; ++l) sigma(k, l) = std::pow(rho, std::abs(k - l));
  return sigma;
}

Matrix gen_omega(OmegaStructure structure, int q, std::uint64_t seed, double rewire_prob) {
  if (q < 2) throw ParameterError("gen_omega: need q >= 2");
  switch (structure) {
    case OmegaStructure::AR1: {
      constexpr double rho = 0.7;
      const double denom = 1.0 - rho * rho;
      Matrix omega = Matrix::Zero(q, q);
      for (int k = 0; k < q; ++k) {
        omega(k, k) = (k == 0 || k == q - 1) ? 1.0 / denom : (1.0 + rho * rho) / denom;
        if (k + 1 < q) omega(k, k + 1) = omega(k + 1, k) = -rho / denom;
      }
      return omega;
    }
    case OmegaStructure::AR2: {
      if (q < 3) throw ParameterError("gen_omega: ar2 needs q >= 3");
      Matrix omega = Matrix::Zero(q, q);
      for (int k = 0; k < q; ++k) {
        omega(k, k) = 1.0;
        if (k + 1 < q) omega(k, k + 1) = omega(k + 1, k) = 0.5;
        if (k + 2 < q) omega(k, k + 2) = omega(k + 2, k) = 0.25;
      }
      return omega;
    }
    case OmegaStructure::BlockDiagonal: {
      const int half = q / 2;
      Matrix sigma = Matrix::Zero(q, q);
      for (int k = 0; k < q; ++k)
        for (int l = 0; l < q; ++l)
          if ((k < half) == (l < half)) sigma(k, l) = k == l ? 1.0 : 0.5;
      return linalg::pd_inverse(sigma);
    }
    case OmegaStructure::StarGraph: {
      Matrix omega = Matrix::Identity(q, q);
      for (int k = 1; k < q; ++k) omega(0, k) = omega(k, 0) = 0.1;
      return omega;
    }
    case OmegaStructure::SmallWorld:
      return graph_precision(q, watts_strogatz(q, rewire_prob, derive_seed(seed, {1})),
                             derive_seed(seed, {2}));
    case OmegaStructure::TreeNetwork:
      return graph_precision(q, wilson_tree(q, derive_seed(seed, {1})), derive_seed(seed, {2}));
  }
  throw ParameterError("gen_omega: unknown structure");
}

Matrix gen_coefficients(const SignalRegime& regime, int p, int q, std::uint64_t seed) {
  if (!(regime.density >= 0.0 && regime.density < 1.0))
    throw ParameterError("gen_coefficients: density must lie in [0,1)");
  const int total = p * q;
  const int nonzero = static_cast<int>(std::lround(regime.density * total));
  Engine rng = make_engine(seed);
  std::vector<int> positions(static_cast<std::size_t>(total));
  std::iota(positions.begin(), positions.end(), 0);
  for (int i = 0; i < nonzero; ++i) {
    std::uniform_int_distribution<int> pick(i, total - 1);
    std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(pick(rng))]);
  }
  std::sort(positions.begin(), positions.begin() + nonzero);

  Matrix B = Matrix::Zero(p, q);
  std::uniform_real_distribution<double> wide(-5.0, 5.0);
  std::uniform_real_distribution<double> outer(2.0, 5.0);
  std::bernoulli_distribution negative(0.5);
  for (int i = 0; i < nonzero; ++i) {
    const int pos = positions[static_cast<std::size_t>(i)];
    double value;
    if (regime.kind == SignalKind::Uniform) {
      value = wide(rng);
    } else {
      const double m = outer(rng);
      value = negative(rng) ? -m : m;
    }
    B(pos % p, pos / p) = value;
  }
  return B;
}

Matrix gen_covariates(int n, int p, std::uint64_t seed) {
  // Gamma_jj' = 0.5^|j-j'|. Its Cholesky factor acts as the AR(1) recursion
  // x_j = 0.5 x_{j-1} + sqrt(0.75) e_j.
  constexpr double rho = 0.5;
  const double innovation = std::sqrt(1.0 - rho * rho);
  Engine rng = make_engine(seed);
  std::normal_distribution<double> normal;
  Matrix X(n, p);
  for (int i = 0; i < n; ++i) {
    double prev = 0.0;
    for (int j = 0; j < p; ++j) {
      const double e = normal(rng);
      prev = j == 0 ? e : rho * prev + innovation * e;
      X(i, j) = prev;
    }
  }
  return X;
}

std::pair<Matrix, Matrix> simulate_latent_and_outcomes(const Matrix& X, const Matrix& B,
                                                       const Matrix& Omega,
                                                       const std::vector<OutcomeKind>& kinds,
                                                       std::uint64_t seed) {
  const Eigen::Index q = Omega.rows();
  if (X.cols() != B.rows() || B.cols() != q || static_cast<Eigen::Index>(kinds.size()) != q)
    throw InputShapeError("simulate_outcomes: dimensions do not conform");
  const Matrix sigma = linalg::pd_inverse(Omega);
  const auto factor = linalg::cholesky_or_throw(sigma, "simulate_outcomes");

  Engine rng = make_engine(seed);
  std::normal_distribution<double> normal;
  Matrix E(X.rows(), q);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index k = 0; k < q; ++k) E(i, k) = normal(rng);
  Matrix Z = X * B + E * factor.L.transpose();
  Matrix Y = Z;
  for (Eigen::Index k = 0; k < q; ++k)
    if (kinds[static_cast<std::size_t>(k)] == OutcomeKind::Binary)
      Y.col(k) = Z.col(k).unaryExpr([](double z) { return link_binary(z); });
  return {std::move(Z), std::move(Y)};
}

Matrix simulate_outcomes(const Matrix& X, const Matrix& B, const Matrix& Omega,
                         const std::vector<OutcomeKind>& kinds, std::uint64_t seed) {
  return simulate_latent_and_outcomes(X, B, Omega, kinds, seed).second;
}

std::vector<OutcomeKind> mixed_kinds(int q_continuous, int q_binary) {
  std::vector<OutcomeKind> kinds(static_cast<std::size_t>(q_continuous), OutcomeKind::Continuous);
  kinds.insert(kinds.end(), static_cast<std::size_t>(q_binary), OutcomeKind::Binary);
  return kinds;
}

bool binary_variance_mismatch(const Matrix& Omega, const std::vector<OutcomeKind>& kinds,
                              double tol) {
  const Matrix sigma = linalg::pd_inverse(Omega);
  for (std::size_t k = 0; k < kinds.size(); ++k)
    if (kinds[k] == OutcomeKind::Binary &&
        std::abs(sigma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) - 1.0) > tol)
      return true;
  return false;
}

}  // namespace mixssl::sim
