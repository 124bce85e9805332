#include "mixssl/linalg.hpp"

#include <cmath>

#include "mixssl/errors.hpp"

namespace mixssl::linalg {

double CholeskyFactor::log_det() const {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < L.rows(); ++k) acc += std::log(L(k, k));
  return 2.0 * acc;
}

Matrix CholeskyFactor::solve(const Matrix& rhs) const {
  Matrix y = L.triangularView<Eigen::Lower>().solve(rhs);
  return L.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix CholeskyFactor::inverse() const {
  Matrix inv = solve(Matrix::Identity(L.rows(), L.rows()));
  return symmetrize(inv);
}

std::optional<CholeskyFactor> cholesky(const Matrix& A) {
  if (A.rows() != A.cols()) throw InputShapeError("cholesky: matrix is not square");
  const Eigen::Index q = A.rows();
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InputError("cholesky: matrix is not symmetric");
  if (q == 0) return CholeskyFactor{Matrix(0, 0)};
  const double max_diag = A.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) return std::nullopt;
  const double pivot_floor = 1e-12 * max_diag;

  Matrix L = Matrix::Zero(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    double d = A(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > pivot_floor) || !std::isfinite(d)) return std::nullopt;
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < q; ++i) {
      double s = A(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / ljj;
    }
  }
  return CholeskyFactor{std::move(L)};
}

CholeskyFactor cholesky_or_throw(const Matrix& A, const char* what) {
  auto f = cholesky(A);
  if (!f) throw ConditioningError(std::string(what) + ": matrix is not positive definite");
  return std::move(*f);
}

bool is_positive_definite(const Matrix& A) { return cholesky(A).has_value(); }

double log_det_pd(const Matrix& A) { return cholesky_or_throw(A, "log_det_pd").log_det(); }

Matrix pd_inverse(const Matrix& A) { return cholesky_or_throw(A, "pd_inverse").inverse(); }

Matrix solve_pd(const Matrix& A, const Matrix& rhs) {
  if (rhs.rows() != A.rows()) throw InputShapeError("solve_pd: dimension mismatch");
  return cholesky_or_throw(A, "solve_pd").solve(rhs);
}

Matrix tree_sum(std::span<const Matrix> terms) {
  if (terms.empty()) return {};
  if (terms.size() == 1) return terms.front();
  const std::size_t half = terms.size() / 2;
  return tree_sum(terms.first(half)) + tree_sum(terms.subspan(half));
}

Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }

}  // namespace mixssl::linalg
