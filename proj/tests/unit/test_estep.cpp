#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "../oracles/slab_oracle.hpp"
#include "mixssl/errors.hpp"
#include "mixssl/estep.hpp"

using namespace mixssl;

TEST(SlabProbability, MatchesHighPrecisionOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const double theta = 0.001 + 0.998 * u(rng);
    const double l1 = 0.01 + u(rng);
    const double l0 = l1 + 200.0 * u(rng);
    const double beta = (u(rng) - 0.5) * 4.0;
    const double ref = oracle::slab_probability(beta, l1, l0, theta);
    EXPECT_NEAR(slab_probability(beta, l1, l0, theta), ref, 1e-12 * ref);
  }
}

TEST(SlabProbability, EqualRatesReturnMix) {
  EXPECT_NEAR(slab_probability(3.0, 2.0, 2.0, 0.3), 0.3, 1e-15);
}

TEST(SlabProbability, MonotoneInMagnitude) {
  double last = 0.0;
  for (double b = 0.0; b < 2.0; b += 0.01) {
    const double v = slab_probability(b, 0.5, 40.0, 0.1);
    EXPECT_GE(v, last);
    last = v;
  }
  EXPECT_DOUBLE_EQ(slab_probability(-0.7, 0.5, 40.0, 0.1), slab_probability(0.7, 0.5, 40.0, 0.1));
}

TEST(SlabProbability, ExtremeArgumentsStayFinite) {
  const double hi = slab_probability(1e6, 0.1, 1e4, 0.5);
  const double lo = slab_probability(0.0, 0.1, 1e300, 1e-300);
  EXPECT_EQ(hi, 1.0);
  EXPECT_TRUE(std::isfinite(lo));
  EXPECT_GE(lo, 0.0);
}

TEST(SlabProbability, RejectsBadArguments) {
  EXPECT_THROW(slab_probability(0.0, 1.0, 2.0, 0.0), ParameterError);
  EXPECT_THROW(slab_probability(0.0, 1.0, 2.0, 1.0), ParameterError);
  EXPECT_THROW(slab_probability(0.0, 2.0, 1.0, 0.5), ParameterError);
  EXPECT_THROW(slab_probability(0.0, 0.0, 1.0, 0.5), ParameterError);
}

TEST(UpdatePenalties, MixesRatesEntrywise) {
  ModelState s;
  s.B = Matrix(2, 2);
  s.B << 0.0, 1.0, -0.2, 0.05;
  s.Omega = Matrix::Identity(2, 2);
  s.Omega(0, 1) = s.Omega(1, 0) = 0.3;
  s.theta = 0.2;
  s.eta = 0.4;
  Hyperparameters h;
  h.lambda1 = 0.5;
  h.lambda0 = 20.0;
  h.xi1 = 1.0;
  h.xi0 = 30.0;
  const auto pen = update_penalties(s, h);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const double ps = oracle::slab_probability(s.B(j, k), 0.5, 20.0, 0.2);
      EXPECT_NEAR(pen.p_star(j, k), ps, 1e-13);
      EXPECT_NEAR(pen.lambda_star(j, k), 0.5 * ps + 20.0 * (1 - ps), 1e-11);
    }
  const double qs = oracle::slab_probability(0.3, 1.0, 30.0, 0.4);
  EXPECT_NEAR(pen.q_star(0, 1), qs, 1e-13);
  EXPECT_NEAR(pen.xi_star(0, 1), qs + 30.0 * (1 - qs), 1e-11);
  EXPECT_EQ(pen.q_star(1, 0), 0.0);
  EXPECT_NEAR(pen.sum_q_star(), qs, 1e-13);
}

TEST(ResidualStats, AveragesOverDraws) {
  Matrix X = Matrix::Random(6, 2);
  Matrix B = Matrix::Random(2, 3);
  LatentDraws lat;
  Matrix expected = Matrix::Zero(3, 3);
  for (int h = 0; h < 4; ++h) {
    lat.draws.push_back(Matrix::Random(6, 3));
    const Matrix r = lat.draws.back() - X * B;
    expected += r.transpose() * r;
  }
  expected /= 4.0;
  const auto st = residual_stats(X, B, lat, 1);
  EXPECT_EQ(st.draws, 4);
  EXPECT_LT((st.S - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(st.S, st.S.transpose());
  const auto st4 = residual_stats(X, B, lat, 4);
  EXPECT_EQ(st.S, st4.S);
}

TEST(ResidualStats, ShapeErrors) {
  LatentDraws none;
  EXPECT_THROW(residual_stats(Matrix::Zero(3, 2), Matrix::Zero(2, 1), none), InputShapeError);
  LatentDraws bad;
  bad.draws.push_back(Matrix::Zero(4, 1));
  EXPECT_THROW(residual_stats(Matrix::Zero(3, 2), Matrix::Zero(2, 1), bad), InputShapeError);
}
