// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "qplanar/connection.hpp"
#include "qplanar/planar.hpp"
#include "qplanar/random.hpp"

using namespace qplanar;

namespace {

Execution policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_PlanarityResidual(benchmark::State& state) {
  Rng rng(1);
  const AStructure q = AStructure::quaternionic(2);
  const Connection w = Connection::weyl(QuatCovector::from_real(0.5 * rng.normal_vector(8)));
  const Curve c = integrate_planar_curve(Connection::flat(8), q, rng.normal_vector(8), rng.normal_vector(8),
                                         random_coefficient_curve(rng, 4, 0.5), 1.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(planarity_residual(w, q, c, policy_of(state)).max_residual);
}

void BM_GenericRank(benchmark::State& state) {
  const AStructure q = AStructure::quaternionic(3);
  for (auto _ : state) benchmark::DoNotOptimize(generic_rank_check(q, 200, 1, policy_of(state)).fraction);
}

void BM_DecomposeA1(benchmark::State& state) {
  Rng rng(2);
  const AStructure q = AStructure::quaternionic(3);
  OneFormList alphas;
  for (int i = 0; i < 4; ++i) alphas.push_back(rng.normal_vector(12));
  const SymTensor p = make_A1(alphas, q);
  DecomposeOptions opt;
  opt.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_A1(p, q, opt).residual);
}

void BM_CheckPlanarMap(benchmark::State& state) {
  const AStructure q = AStructure::quaternionic(2);
  const Connection flat = Connection::flat(8);
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(8, 8);
  f(0, 5) = 0.3;
  CurveBatchSpec batch;
  batch.curves = 8;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        check_planar_map(PlanarMap::linear(f), flat, q, flat, q, batch, 3, 1e-4, policy_of(state)).max_image_residual);
}

}  // namespace

BENCHMARK(BM_PlanarityResidual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenericRank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecomposeA1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckPlanarMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
