#include <benchmark/benchmark.h>

#include <random>

#include "gca/boundary.hpp"
#include "gca/representation.hpp"
#include "gca/spectral.hpp"
#include "support/random_groupoid.hpp"

using namespace gca;

namespace {

CompactificationModel z_line_model() {
  CompactificationModel cm;
  cm.dim = 1;
  cm.fiber_map = FiberMap::sign;
  cm.boundary = {{"minus_inf", LatticeGroup{1}}, {"plus_inf", LatticeGroup{1}}};
  return cm;
}

BandKernel step_band() {
  BandKernel bk;
  bk.self_adjoint = true;
  bk.coefficients[{1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{-1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{0, 0}] = StepCoefficient{4.0, 0.0};
  return bk;
}

void bench_convolve(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const GroupoidPtr g = gca::test::random_groupoid(
      rng, {static_cast<int>(state.range(0)), 4 * static_cast<int>(state.range(0)),
            false, true});
  const Kernel f = gca::test::random_kernel(rng, g, 0.8);
  const Kernel h = gca::test::random_kernel(rng, g, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(f, h));
}
BENCHMARK(bench_convolve)->Arg(8)->Arg(12);

void bench_hahn_norm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const GroupoidPtr g = gca::test::random_groupoid(rng, {12, 60, false, true});
  const Kernel f = gca::test::random_kernel(rng, g, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(hahn_norm(f));
}
BENCHMARK(bench_hahn_norm);

void bench_regular_rep(benchmark::State& state) {
  const GroupoidPtr g = build_pair_groupoid(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(3);
  const Kernel f = gca::test::random_kernel(rng, g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(regular_rep(f, 0));
}
BENCHMARK(bench_regular_rep)->Arg(8)->Arg(16);

void bench_interior_assembly(benchmark::State& state) {
  const RealizedModel rm = realize(z_line_model(), static_cast<int>(state.range(0)));
  const BandKernel bk = step_band();
  for (auto _ : state) benchmark::DoNotOptimize(interior_matrix_real(bk, rm));
}
BENCHMARK(bench_interior_assembly)->Arg(500)->Arg(2000);

void bench_band_matvec(benchmark::State& state) {
  const RealizedModel rm = realize(z_line_model(), static_cast<int>(state.range(0)));
  const BandKernel bk = step_band();
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(rm.interior_count());
  for (auto _ : state) benchmark::DoNotOptimize(band_apply(bk, rm, x));
}
BENCHMARK(bench_band_matvec)->Arg(2000);

void bench_symbol_sampling(benchmark::State& state) {
  const CompactificationModel cm = z_line_model();
  const BandKernel bk = step_band();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fourier_symbol_spectrum(bk, cm, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(bench_symbol_sampling)->Arg(4096)->Arg(65536);

void bench_symmetric_eig(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RealizedModel rm = realize(z_line_model(), (n - 1) / 2);
  const Eigen::MatrixXd h = interior_matrix_real(step_band(), rm);
  for (auto _ : state) {
    Eigen::MatrixXd copy = h;
    benchmark::DoNotOptimize(dense_symmetric_eig(std::move(copy)));
  }
}
BENCHMARK(bench_symmetric_eig)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
