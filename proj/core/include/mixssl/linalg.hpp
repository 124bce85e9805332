#pragma once

#include <optional>

#include "mixssl/core_types.hpp"

namespace mixssl::linalg {

/// Lower-triangular L with L * L^T = A.
struct CholeskyFactor {
  Matrix L;

  Eigen::Index size() const { return L.rows(); }
  double log_det() const;
  Matrix solve(const Matrix& rhs) const;
  Matrix inverse() const;
};

/// Factorizes a symmetric matrix. Returns nullopt when a pivot falls to or
/// below 1e-12 times the largest diagonal entry. Throws InputError when A is
/// asymmetric beyond 1e-10 (relative to its largest entry).
std::optional<CholeskyFactor> cholesky(const Matrix& A);

/// As cholesky(), but throws ConditioningError on a non-PD input.
CholeskyFactor cholesky_or_throw(const Matrix& A, const char* what);

bool is_positive_definite(const Matrix& A);
double log_det_pd(const Matrix& A);
Matrix pd_inverse(const Matrix& A);
Matrix solve_pd(const Matrix& A, const Matrix& rhs);

/// Sums the terms in a balanced binary tree. The association order depends
/// only on the number of terms.
Matrix tree_sum(std::span<const Matrix> terms);

Matrix symmetrize(const Matrix& A);

}  // namespace mixssl::linalg
