#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hsplab/bessel.hpp"
#include "hsplab/functionals.hpp"
#include "hsplab/solver.hpp"
#include "hsplab/spectral.hpp"

using namespace hsplab;

namespace {

RadialField gaussian(const GridPtr& g) {
    return RadialField::sample(g, [](double r) { return std::exp(-r * r); });
}

void BM_RadialKernel(benchmark::State& state) {
    const RadialKernel k(static_cast<int>(state.range(0)));
    double z = 0.0;
    for (auto _ : state) {
        z = z > 40.0 ? 0.0 : z + 0.013;
        benchmark::DoNotOptimize(k(z));
    }
}
BENCHMARK(BM_RadialKernel)->Arg(5)->Arg(8);

// Kernel matrix is cached after the first call; this times the quadrature.
void BM_Hankel(benchmark::State& state) {
    const GridPtr g = make_grid(make_params(5, 1.0), static_cast<std::size_t>(state.range(0)), 40.0);
    const RadialField u = gaussian(g);
    benchmark::DoNotOptimize(hankel_transform(u));
    for (auto _ : state) benchmark::DoNotOptimize(hankel_transform(u));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hankel)->Arg(512)->Arg(1024)->Arg(2048)->Complexity(benchmark::oNSquared);

void BM_SolverStep(benchmark::State& state) {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, static_cast<std::size_t>(state.range(0)), 40.0);
    const Stepper stepper(p, g, OuterBoundary::dirichlet);
    std::vector<double> u = gaussian(g).data();
    for (auto _ : state) {
        stepper.step(u, 1e-4);
        benchmark::ClobberMemory();
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolverStep)->Arg(1024)->Arg(4096)->Arg(16384)->Complexity(benchmark::oN);

void BM_Energy(benchmark::State& state) {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 4096, 40.0);
    const RadialField u = gaussian(g);
    for (auto _ : state) benchmark::DoNotOptimize(energy(u, p));
}
BENCHMARK(BM_Energy);

}  // namespace
BENCHMARK_MAIN();
