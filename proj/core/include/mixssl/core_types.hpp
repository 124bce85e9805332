#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixssl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class OutcomeKind { Continuous, Binary };

std::string to_string(OutcomeKind kind);
OutcomeKind parse_outcome_kind(const std::string& text);

/// Observed data in canonical layout: continuous outcome columns first,
/// binary columns after, each block keeping the user's relative order.
///
/// `column_order[u]` is the canonical index of user column `u`.
struct Dataset {
  Matrix X;
  Matrix Y;
  std::vector<OutcomeKind> kinds;
  std::vector<int> column_order;

  /// Builds a dataset from user-ordered columns, reordering Y and kinds
  /// into canonical layout.
  static Dataset from_user_order(Matrix X, const Matrix& Y_user,
                                 const std::vector<OutcomeKind>& kinds_user);

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index q() const { return Y.cols(); }
  Eigen::Index q_continuous() const;
  Eigen::Index q_binary() const { return q() - q_continuous(); }
  bool has_binary() const { return q_binary() > 0; }
};

/// Permutation helpers between user and canonical outcome order.
std::vector<int> canonical_order(const std::vector<OutcomeKind>& kinds_user);
Matrix columns_to_user_order(const Matrix& canonical, const std::vector<int>& column_order);
Matrix columns_to_canonical_order(const Matrix& user, const std::vector<int>& column_order);
Matrix outcome_matrix_to_user_order(const Matrix& canonical,
                                    const std::vector<int>& column_order);
Matrix outcome_matrix_to_canonical_order(const Matrix& user,
                                         const std::vector<int>& column_order);
std::vector<OutcomeKind> kinds_to_user_order(const std::vector<OutcomeKind>& canonical,
                                             const std::vector<int>& column_order);

struct ModelState {
  Matrix B;      // p x q latent regression coefficients
  Matrix Omega;  // q x q latent precision
  double theta = 0.5;
  double eta = 0.5;
};

struct Hyperparameters {
  double lambda1 = 0.0;
  double lambda0 = 0.0;
  double xi1 = 0.0;
  double xi0 = 0.0;
  double a_theta = 1.0;
  double b_theta = 1.0;
  double a_eta = 1.0;
  double b_eta = 1.0;
  int draws = 2000;  // Monte Carlo draws per E-step
  std::vector<double> lambda0_grid;
  std::vector<double> xi0_grid;
  int max_sweeps = 1000;  // coordinate-ascent sweeps per CM step
  double tol = 1e-4;      // sweep convergence on max |change in beta|

  /// Recommended defaults for a problem of size (n, p, q): slab rates
  /// 1/sqrt(n log n) and n/100, ten-point spike ladders 10..100 and n/10..n,
  /// Beta(1, pq) and Beta(1, q) mixing priors, 2000 draws.
  static Hyperparameters defaults(Eigen::Index n, Eigen::Index p, Eigen::Index q);

  /// Throws ParameterError when rates, grids, or counts are inconsistent.
  void validate() const;
};

struct LatentDraws {
  std::vector<Matrix> draws;           // each n x q, canonical layout
  std::vector<std::uint64_t> seeds;    // per-observation chain seed

  Eigen::Index count() const { return static_cast<Eigen::Index>(draws.size()); }
  Matrix mean() const;
};

/// y = g(z): continuous coordinates copied, binary ones mapped to 1{z >= 0}.
std::vector<double> apply_link(std::span<const double> z, std::span<const OutcomeKind> kinds);
double link_binary(double z);

struct Standardization {
  Matrix X;
  Vector centers;
  Vector scales;

  /// Applies the stored centering and scaling to new rows.
  Matrix transform(const Matrix& X_raw) const;
  Matrix inverse(const Matrix& X_std) const;
};

/// Centers each column and rescales it to Euclidean norm sqrt(n).
Standardization standardize(const Matrix& X_raw);

struct Violation {
  std::string message;
};

std::vector<Violation> validate_dataset(const Dataset& data);
/// Throws InputError listing every violation.
void require_valid(const Dataset& data);
bool is_standardized(const Matrix& X, double tol = 1e-8);

std::vector<Violation> validate_model_state(const ModelState& state,
                                            const std::vector<OutcomeKind>& kinds,
                                            double unit_variance_tol = 1e-6);

}  // namespace mixssl
