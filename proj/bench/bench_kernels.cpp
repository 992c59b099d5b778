// Serial reference kernels against the OpenMP ones on the 1-D preset grid
// (m = 127, n = 200). Set OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include <random>

#include "wedreg/functional.hpp"
#include "wedreg/validation.hpp"

namespace {

struct Fixture {
  wedreg::WedProblem prob;
  wedreg::Trajectory traj;
  wedreg::FreeVariables dir;

  Fixture() {
    const auto dom = wedreg::SpatialDomain::interval(8.0, 127);
    prob = wedreg::make_problem(dom, wedreg::Nonlinearity::power(4.0),
                                wedreg::make_datum(dom, "bump 1"),
                                wedreg::make_datum(dom, "zero"),
                                wedreg::build_grid(2.0, 200), 0.1);
    std::mt19937_64 rng(7);
    traj = wedreg::embed(wedreg::affine_free(prob) + wedreg::random_free(prob, rng, 0.1),
                         prob);
    dir = wedreg::random_free(prob, rng);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_FunctionalSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(wedreg::serial::eval_functional(f.traj, f.prob));
}
void BM_FunctionalParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(wedreg::eval_functional(f.traj, f.prob));
}
void BM_GradientSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(wedreg::serial::gradient(f.traj, f.prob));
}
void BM_GradientParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(wedreg::gradient(f.traj, f.prob));
}
void BM_HessianApplySerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wedreg::serial::hessian_apply(f.traj, f.dir, f.prob));
  }
}
void BM_HessianApplyParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(wedreg::hessian_apply(f.traj, f.dir, f.prob));
}

}  // namespace

BENCHMARK(BM_FunctionalSerial);
BENCHMARK(BM_FunctionalParallel);
BENCHMARK(BM_GradientSerial);
BENCHMARK(BM_GradientParallel);
BENCHMARK(BM_HessianApplySerial);
BENCHMARK(BM_HessianApplyParallel);

BENCHMARK_MAIN();
