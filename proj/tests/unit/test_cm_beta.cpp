#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "../oracles/lasso_oracle.hpp"
#include "mixssl/cm_beta.hpp"
#include "mixssl/errors.hpp"

using namespace mixssl;

TEST(UpdateBetaEntry, HandEvaluated) {
  // |score| - penalty = 3, scale 2 -> 1.5 when the gate passes.
  EXPECT_DOUBLE_EQ(update_beta_entry(5.0, 2.0, 1.0, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(update_beta_entry(-5.0, 2.0, 1.0, 2.0), -1.5);
  // Gate: |score/scale| = 2.5 not above 3.
  EXPECT_EQ(update_beta_entry(5.0, 2.0, 3.0, 2.0), 0.0);
  // Soft threshold kills it.
  EXPECT_EQ(update_beta_entry(1.0, 2.0, 0.0, 2.0), 0.0);
  EXPECT_THROW(update_beta_entry(1.0, 0.0, 0.0, 0.0), ParameterError);
}

TEST(ThresholdDelta, Branches) {
  // theta = 0.5, lambda1 = 1, lambda0 = 50, d = 1000: fallback branch.
  const double p0 = 1.0 / 51.0;
  const double L0 = p0 + 50.0 * (1 - p0);
  EXPECT_LE((L0 - 1.0) * (L0 - 1.0), 2000.0 * std::log(51.0));
  EXPECT_NEAR(threshold_delta(1.0, 50.0, 0.5, 1000.0), L0 / 1000.0, 1e-15);

  // Small d: gap branch, strictly below L0/d.
  const double d = 1.0;
  const double p0b = slab_probability(0.0, 1.0, 50.0, 0.5);
  const double L0b = mixed_penalty(p0b, 1.0, 50.0);
  const double expected = (std::sqrt(2.0 * d * std::log(1.0 / p0b)) + 1.0) / d;
  EXPECT_NEAR(threshold_delta(1.0, 50.0, 0.5, d), expected, 1e-14);
  EXPECT_LT(threshold_delta(1.0, 50.0, 0.5, d), L0b / d);
  EXPECT_GT(threshold_delta(1.0, 50.0, 0.5, d), 1.0 / d);
}

TEST(UpdateTheta, ClosedFormAndClip) {
  EXPECT_DOUBLE_EQ(update_theta(3.0, 1.0, 10.0, 20), 3.0 / 29.0);
  EXPECT_GT(update_theta(0.0, 1.0, 10.0, 20), 0.0);
  EXPECT_LT(update_theta(20.0, 1.0, 1.0, 20), 1.0);
}

TEST(BetaWorkspace, ScoreMatchesDirectFormula) {
  const Matrix X = Matrix::Random(12, 4);
  const Matrix Z = Matrix::Random(12, 3);
  Matrix B = Matrix::Random(4, 3);
  Matrix Om(3, 3);
  Om << 2.0, 0.5, -0.3, 0.5, 1.5, 0.2, -0.3, 0.2, 1.0;
  BetaWorkspace ws(X, Z, B, Om);
  for (int t = 0; t < 30; ++t) {
    const int j = t % 4, k = (t / 4) % 3;
    Matrix Bm = ws.B();
    Bm(j, k) = 0.0;
    const Matrix R = Z - X * Bm;
    const double direct = X.col(j).dot(R * Om.col(k));
    EXPECT_NEAR(ws.score(j, k), direct, 1e-11);
    ws.set(j, k, 0.1 * t - 1.0);
  }
  EXPECT_LT(ws.residual_drift(), 1e-12);
}

TEST(CmStepBeta, SingleOutcomeEqualRatesIsLasso) {
  const int n = 60, p = 8;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Matrix X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = nd(rng);
  Vector beta = Vector::Zero(p);
  beta(0) = 2.0;
  beta(3) = -1.5;
  Vector y = X * beta;
  for (int i = 0; i < n; ++i) y(i) += nd(rng);

  Hyperparameters h;
  h.lambda1 = h.lambda0 = 5.0;
  h.tol = 1e-13;
  h.max_sweeps = 100000;
  ModelState s{Matrix::Zero(p, 1), Matrix::Constant(1, 1, 0.8)};
  const auto pen = update_penalties(s, h);
  const auto res = cm_step_beta_mean(X, y, s, pen, h);
  const Vector ref = oracle::lasso_cd(X, y, 5.0 / 0.8);
  EXPECT_LT((res.B.col(0) - ref).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_TRUE(res.converged);
}

TEST(CmStepBeta, ObjectiveNonDecreasingWithoutGate) {
  // Equal rates give delta = lambda1 / d, which never binds after a positive
  // soft threshold, so coordinate ascent is monotone.
  const int n = 40, p = 6, q = 3;
  const Matrix X = Matrix::Random(n, p);
  const Matrix Z = Matrix::Random(n, q) * 3.0;
  Matrix Om(3, 3);
  Om << 1.5, 0.4, 0.0, 0.4, 1.2, -0.3, 0.0, -0.3, 1.0;
  Hyperparameters h;
  h.lambda1 = h.lambda0 = 0.7;
  h.xi1 = h.xi0 = 1.0;
  ModelState s{Matrix::Zero(p, q), Om};
  const auto pen = update_penalties(s, h);
  double last = beta_objective(X, Z, s.B, Om, pen.lambda_star);
  for (int round = 0; round < 5; ++round) {
    h.max_sweeps = 1;
    const auto r = cm_step_beta_mean(X, Z, s, pen, h);
    const double obj = beta_objective(X, Z, r.B, Om, pen.lambda_star);
    EXPECT_GE(obj, last - 1e-10);
    last = obj;
    s.B = r.B;
  }
}

TEST(CmStepBeta, LatentMeanEquivalence) {
  const Matrix X = Matrix::Random(20, 3);
  LatentDraws lat;
  lat.draws = {Matrix::Random(20, 2), Matrix::Random(20, 2), Matrix::Random(20, 2)};
  Hyperparameters h;
  h.lambda1 = 0.2;
  h.lambda0 = 4.0;
  h.xi1 = h.xi0 = 1.0;
  ModelState s{Matrix::Zero(3, 2), Matrix::Identity(2, 2)};
  const auto pen = update_penalties(s, h);
  const auto a = cm_step_beta(X, lat, s, pen, h);
  const auto b = cm_step_beta_mean(X, lat.mean(), s, pen, h);
  EXPECT_EQ(a.B, b.B);
}
