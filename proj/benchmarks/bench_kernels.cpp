#include <benchmark/benchmark.h>

#include "mixssl/cm_beta.hpp"
#include "mixssl/cm_omega.hpp"
#include "mixssl/estep.hpp"
#include "mixssl/simgen.hpp"
#include "mixssl/truncnorm.hpp"

using namespace mixssl;

namespace {

Dataset mixed_data(int n, int p, int q) {
  const auto kinds = sim::mixed_kinds(q / 2, q - q / 2);
  const Matrix Om = sim::gen_omega(sim::OmegaStructure::AR1, q, 1);
  const Matrix B = sim::gen_coefficients(sim::SignalRegime::uniform(), p, q, 2);
  const Matrix X = standardize(sim::gen_covariates(n, p, 3)).X;
  return Dataset::from_user_order(X, sim::simulate_outcomes(X, B, Om, kinds, 4), kinds);
}

void BM_LinessStep(benchmark::State& state) {
  const auto q = static_cast<int>(state.range(0));
  const auto g = ConditionalGaussian::make(Vector::Zero(q), sim::gen_omega(sim::OmegaStructure::AR1, q, 0));
  OrthantConstraint c;
  for (int k = 0; k < q; ++k) c.signs.push_back(k % 2 ? -1 : 1);
  Engine rng(1);
  Vector z(q);
  for (int k = 0; k < q; ++k) z(k) = c.signs[static_cast<std::size_t>(k)] * 0.5;
  for (auto _ : state) {
    z = liness_step(z, g, c, rng);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_LinessStep)->Arg(2)->Arg(4)->Arg(10);

void BM_SampleLatents(benchmark::State& state) {
  const auto data = mixed_data(200, 100, 4);
  ModelState s{Matrix::Zero(100, 4), sim::gen_omega(sim::OmegaStructure::AR1, 4, 1)};
  std::uint64_t it = 0;
  for (auto _ : state) {
    const auto latent = sample_latents(data, s, static_cast<int>(state.range(0)), SeedKey{1, 0, ++it});
    benchmark::DoNotOptimize(latent.draws.data());
  }
}
BENCHMARK(BM_SampleLatents)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CmStepBeta(benchmark::State& state) {
  const auto p = static_cast<int>(state.range(0));
  const auto data = mixed_data(200, p, 4);
  auto h = Hyperparameters::defaults(200, p, 4);
  h.lambda0 = 20.0;
  ModelState s{Matrix::Zero(p, 4), Matrix::Identity(4, 4), 0.1, 0.5};
  const auto pen = update_penalties(s, h);
  for (auto _ : state) {
    const auto r = cm_step_beta_mean(data.X, data.Y, s, pen, h);
    benchmark::DoNotOptimize(r.B.data());
  }
}
BENCHMARK(BM_CmStepBeta)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Glasso(benchmark::State& state) {
  const auto q = static_cast<int>(state.range(0));
  const Matrix sigma = linalg::pd_inverse(sim::gen_omega(sim::OmegaStructure::AR1, q, 0));
  PenalizedGLassoProblem pr{sigma * 200.0, 200.0, 2.0, Matrix::Constant(q, q, 20.0)};
  for (auto _ : state) {
    const auto r = solve_penalized_glasso(pr, Matrix::Identity(q, q));
    benchmark::DoNotOptimize(r.Omega.data());
  }
}
BENCHMARK(BM_Glasso)->Arg(4)->Arg(20)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
