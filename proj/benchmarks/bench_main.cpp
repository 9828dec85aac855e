// bench_main.cpp — microbenchmarks for the hot paths: diagonalization,
// generator assembly, and the apply kernels driven by the ensembles.

#include <benchmark/benchmark.h>

#include "qme/dynamics.hpp"
#include "qme/generator.hpp"

using namespace qme;

namespace {

const SpectralModel kBath = SpectralModel::ohmic(Statistics::bosonic, 5.0, 0.0, 0.2, 10.0);

void BM_Diagonalize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ham = build_gue(n, 1.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(ham.hopping));
}
BENCHMARK(BM_Diagonalize)->Arg(16)->Arg(32)->Arg(64);

void BM_BuildRedfieldDephasing(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ham = build_gue(n, 1.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(build_redfield_dephasing(ham, kBath));
}
BENCHMARK(BM_BuildRedfieldDephasing)->Arg(16)->Arg(32)->Arg(64);

void BM_ApplyRedfieldDephasing(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ham = build_gue(n, 1.0, 3);
    const auto g = build_redfield_dephasing(ham, kBath);
    Matrix rho = Matrix::Zero(n, n);
    rho(0, 0) = 1.0;
    rho = ham.to_eigenbasis(rho);
    for (auto _ : state) benchmark::DoNotOptimize(g.apply(rho));
}
BENCHMARK(BM_ApplyRedfieldDephasing)->Arg(16)->Arg(32)->Arg(64);

void BM_ApplyDaviesDephasing(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ham = build_gue(n, 1.0, 4);
    const auto g = build_davies_dephasing(ham, kBath);
    Matrix rho = Matrix::Zero(n, n);
    rho(0, 0) = 1.0;
    rho = ham.to_eigenbasis(rho);
    for (auto _ : state) benchmark::DoNotOptimize(g.apply(rho));
}
BENCHMARK(BM_ApplyDaviesDephasing)->Arg(16)->Arg(32)->Arg(64);

void BM_EvolveStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ham = build_gue(n, 1.0, 5);
    const auto g = build_redfield_dephasing(ham, kBath);
    Matrix rho0 = Matrix::Zero(n, n);
    rho0(0, 0) = 1.0;
    EvolveOptions opts;
    opts.step = default_step(g);
    opts.monitor = false;
    const std::vector<double> grid{0.0, opts.step};
    for (auto _ : state) benchmark::DoNotOptimize(evolve(g, rho0, grid, opts));
}
BENCHMARK(BM_EvolveStep)->Arg(16)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
