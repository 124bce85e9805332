#include "mixssl/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mixssl/errors.hpp"
#include "mixssl/linalg.hpp"

namespace mixssl {

std::string to_string(OutcomeKind kind) {
  return kind == OutcomeKind::Continuous ? "continuous" : "binary";
}

OutcomeKind parse_outcome_kind(const std::string& text) {
  if (text == "continuous") return OutcomeKind::Continuous;
  if (text == "binary") return OutcomeKind::Binary;
  throw InputError("unknown outcome kind '" + text + "' (expected continuous or binary)");
}

std::vector<int> canonical_order(const std::vector<OutcomeKind>& kinds_user) {
  std::vector<int> order(kinds_user.size());
  int next = 0;
  for (std::size_t u = 0; u < kinds_user.size(); ++u)
    if (kinds_user[u] == OutcomeKind::Continuous) order[u] = next++;
  for (std::size_t u = 0; u < kinds_user.size(); ++u)
    if (kinds_user[u] == OutcomeKind::Binary) order[u] = next++;
  return order;
}

Matrix columns_to_canonical_order(const Matrix& user, const std::vector<int>& column_order) {
  if (static_cast<Eigen::Index>(column_order.size()) != user.cols())
    throw InputShapeError("column permutation length does not match matrix columns");
  Matrix out(user.rows(), user.cols());
  for (Eigen::Index u = 0; u < user.cols(); ++u) out.col(column_order[u]) = user.col(u);
  return out;
}

Matrix columns_to_user_order(const Matrix& canonical, const std::vector<int>& column_order) {
  if (static_cast<Eigen::Index>(column_order.size()) != canonical.cols())
    throw InputShapeError("column permutation length does not match matrix columns");
  Matrix out(canonical.rows(), canonical.cols());
  for (Eigen::Index u = 0; u < canonical.cols(); ++u) out.col(u) = canonical.col(column_order[u]);
  return out;
}

Matrix outcome_matrix_to_user_order(const Matrix& canonical, const std::vector<int>& column_order) {
  const auto q = static_cast<Eigen::Index>(column_order.size());
  if (canonical.rows() != q || canonical.cols() != q)
    throw InputShapeError("outcome matrix must be q x q");
  Matrix out(q, q);
  for (Eigen::Index a = 0; a < q; ++a)
    for (Eigen::Index b = 0; b < q; ++b) out(a, b) = canonical(column_order[a], column_order[b]);
  return out;
}

Matrix outcome_matrix_to_canonical_order(const Matrix& user, const std::vector<int>& column_order) {
  const auto q = static_cast<Eigen::Index>(column_order.size());
  if (user.rows() != q || user.cols() != q) throw InputShapeError("outcome matrix must be q x q");
  Matrix out(q, q);
  for (Eigen::Index a = 0; a < q; ++a)
    for (Eigen::Index b = 0; b < q; ++b) out(column_order[a], column_order[b]) = user(a, b);
  return out;
}

std::vector<OutcomeKind> kinds_to_user_order(const std::vector<OutcomeKind>& canonical,
                                             const std::vector<int>& column_order) {
  std::vector<OutcomeKind> out(canonical.size());
  for (std::size_t u = 0; u < column_order.size(); ++u) out[u] = canonical[column_order[u]];
  return out;
}

Dataset Dataset::from_user_order(Matrix X, const Matrix& Y_user,
                                 const std::vector<OutcomeKind>& kinds_user) {
  if (static_cast<Eigen::Index>(kinds_user.size()) != Y_user.cols())
    throw InputShapeError("kinds has " + std::to_string(kinds_user.size()) +
                          " entries but Y has " + std::to_string(Y_user.cols()) + " columns");
  Dataset d;
  d.X = std::move(X);
  d.column_order = canonical_order(kinds_user);
  d.Y = columns_to_canonical_order(Y_user, d.column_order);
  d.kinds.resize(kinds_user.size());
  for (std::size_t u = 0; u < kinds_user.size(); ++u) d.kinds[d.column_order[u]] = kinds_user[u];
  return d;
}

Eigen::Index Dataset::q_continuous() const {
  return static_cast<Eigen::Index>(
      std::count(kinds.begin(), kinds.end(), OutcomeKind::Continuous));
}

Hyperparameters Hyperparameters::defaults(Eigen::Index n, Eigen::Index p, Eigen::Index q) {
  Hyperparameters h;
  const double nd = static_cast<double>(n);
  h.lambda1 = 1.0 / std::sqrt(nd * std::log(nd));
  h.xi1 = nd / 100.0;
  h.a_theta = 1.0;
  h.b_theta = static_cast<double>(p * q);
  h.a_eta = 1.0;
  h.b_eta = static_cast<double>(q);
  h.draws = 2000;
  for (int i = 1; i <= 10; ++i) {
    h.lambda0_grid.push_back(10.0 * i);
    h.xi0_grid.push_back(nd * i / 10.0);
  }
  h.lambda0 = h.lambda0_grid.back();
  h.xi0 = h.xi0_grid.back();
  return h;
}

void Hyperparameters::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ParameterError(std::string(name) + " must be a positive finite number");
  };
  positive(lambda1, "lambda1");
  positive(xi1, "xi1");
  positive(a_theta, "a_theta");
  positive(b_theta, "b_theta");
  positive(a_eta, "a_eta");
  positive(b_eta, "b_eta");
  positive(tol, "tol");
  if (draws < 1) throw ParameterError("draws (H) must be at least 1");
  if (max_sweeps < 1) throw ParameterError("max_sweeps must be at least 1");
  auto check_grid = [](const std::vector<double>& grid, double slab, const char* name) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw ParameterError(std::string(name) + " entries must be positive");
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw ParameterError(std::string(name) + " must be strictly increasing");
    }
    if (!grid.empty() && slab > grid.front())
      throw ParameterError(std::string(name) + " minimum must not be below the slab rate");
  };
  check_grid(lambda0_grid, lambda1, "lambda0_grid");
  check_grid(xi0_grid, xi1, "xi0_grid");
  if (lambda0_grid.empty() && lambda0 < lambda1)
    throw ParameterError("lambda0 must not be below lambda1");
  if (xi0_grid.empty() && xi0 < xi1) throw ParameterError("xi0 must not be below xi1");
}

Matrix LatentDraws::mean() const {
  if (draws.empty()) return {};
  Matrix m = Matrix::Zero(draws.front().rows(), draws.front().cols());
  for (const auto& d : draws) m += d;
  return m / static_cast<double>(draws.size());
}

double link_binary(double z) { return z >= 0.0 ? 1.0 : 0.0; }

std::vector<double> apply_link(std::span<const double> z, std::span<const OutcomeKind> kinds) {
  if (z.size() != kinds.size())
    throw InputShapeError("apply_link: latent vector has " + std::to_string(z.size()) +
                          " entries, kinds has " + std::to_string(kinds.size()));
  std::vector<double> y(z.size());
  for (std::size_t k = 0; k < z.size(); ++k)
    y[k] = kinds[k] == OutcomeKind::Continuous ? z[k] : link_binary(z[k]);
  return y;
}

Matrix Standardization::transform(const Matrix& X_raw) const {
  if (X_raw.cols() != centers.size())
    throw InputShapeError("standardization: column count mismatch");
  Matrix out = X_raw.rowwise() - centers.transpose();
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) /= scales(j);
  return out;
}

Matrix Standardization::inverse(const Matrix& X_std) const {
  Matrix out = X_std;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) *= scales(j);
  return out.rowwise() + centers.transpose();
}

Standardization standardize(const Matrix& X_raw) {
  const Eigen::Index n = X_raw.rows();
  if (n < 2) throw InputShapeError("standardize: need at least two rows");
  Standardization s;
  s.centers = X_raw.colwise().mean().transpose();
  s.scales.resize(X_raw.cols());
  s.X = X_raw.rowwise() - s.centers.transpose();
  const double target = std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < X_raw.cols(); ++j) {
    const double norm = s.X.col(j).norm();
    const double spread = X_raw.col(j).maxCoeff() - X_raw.col(j).minCoeff();
    if (!(spread > 0.0) || !(norm > 0.0))
      throw DegenerateCovariateError("covariate column " + std::to_string(j) + " is constant",
                                     static_cast<std::size_t>(j));
    s.scales(j) = norm / target;
    s.X.col(j) /= s.scales(j);
  }
  return s;
}

bool is_standardized(const Matrix& X, double tol) {
  const double target = std::sqrt(static_cast<double>(X.rows()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (std::abs(X.col(j).mean()) > tol) return false;
    if (std::abs(X.col(j).norm() - target) > tol * std::max(1.0, target)) return false;
  }
  return true;
}

std::vector<Violation> validate_dataset(const Dataset& d) {
  std::vector<Violation> out;
  auto add = [&out](std::string msg) { out.push_back({std::move(msg)}); };
  if (d.X.rows() != d.Y.rows())
    add("dimension mismatch: X has " + std::to_string(d.X.rows()) + " rows, Y has " +
        std::to_string(d.Y.rows()));
  if (d.X.rows() < 2) add("need n >= 2 observations");
  if (d.X.cols() < 1) add("need p >= 1 covariates");
  if (d.Y.cols() < 1) add("need q >= 1 outcomes");
  if (static_cast<Eigen::Index>(d.kinds.size()) != d.Y.cols())
    add("kinds has " + std::to_string(d.kinds.size()) + " entries, Y has " +
        std::to_string(d.Y.cols()) + " columns");
  if (!d.column_order.empty() &&
      static_cast<Eigen::Index>(d.column_order.size()) != d.Y.cols())
    add("column_order length does not match Y columns");
  bool seen_binary = false;
  for (auto kind : d.kinds) {
    if (kind == OutcomeKind::Binary) seen_binary = true;
    else if (seen_binary) {
      add("outcomes are not in canonical order (continuous before binary)");
      break;
    }
  }
  for (Eigen::Index i = 0; i < d.X.rows(); ++i)
    for (Eigen::Index j = 0; j < d.X.cols(); ++j)
      if (!std::isfinite(d.X(i, j)))
        add("non-finite covariate at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  for (Eigen::Index i = 0; i < d.Y.rows(); ++i) {
    for (Eigen::Index k = 0; k < d.Y.cols(); ++k) {
      const double v = d.Y(i, k);
      if (!std::isfinite(v)) {
        add("non-finite outcome at (" + std::to_string(i) + "," + std::to_string(k) + ")");
      } else if (k < static_cast<Eigen::Index>(d.kinds.size()) &&
                 d.kinds[k] == OutcomeKind::Binary && v != 0.0 && v != 1.0) {
        add("non-binary value at (" + std::to_string(i) + "," + std::to_string(k) + ")");
      }
    }
  }
  return out;
}

void require_valid(const Dataset& data) {
  const auto violations = validate_dataset(data);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid dataset (" << violations.size() << " violation"
      << (violations.size() == 1 ? "" : "s") << ")";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 10);
  for (std::size_t v = 0; v < shown; ++v) msg << "\n  " << violations[v].message;
  if (shown < violations.size()) msg << "\n  ...";
  throw InputError(msg.str());
}

std::vector<Violation> validate_model_state(const ModelState& s,
                                            const std::vector<OutcomeKind>& kinds,
                                            double unit_variance_tol) {
  std::vector<Violation> out;
  const auto q = static_cast<Eigen::Index>(kinds.size());
  if (s.Omega.rows() != q || s.Omega.cols() != q) {
    out.push_back({"Omega is not q x q"});
    return out;
  }
  if (s.B.cols() != q) out.push_back({"B does not have q columns"});
  if ((s.Omega - s.Omega.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    out.push_back({"Omega is not symmetric"});
  auto factor = linalg::cholesky(linalg::symmetrize(s.Omega));
  if (!factor) {
    out.push_back({"Omega is not positive definite"});
  } else {
    const Matrix sigma = factor->inverse();
    for (Eigen::Index k = 0; k < q; ++k)
      if (kinds[k] == OutcomeKind::Binary && std::abs(sigma(k, k) - 1.0) > unit_variance_tol)
        out.push_back({"binary latent variance at " + std::to_string(k) + " is not 1"});
  }
  if (!(s.theta > 0.0 && s.theta < 1.0)) out.push_back({"theta outside (0,1)"});
  if (!(s.eta > 0.0 && s.eta < 1.0)) out.push_back({"eta outside (0,1)"});
  return out;
}

}  // namespace mixssl
