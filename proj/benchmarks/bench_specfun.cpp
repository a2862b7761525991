#include "osm/specfun.hpp"

#include <benchmark/benchmark.h>

namespace {

// Sweeps the series, middle and asymptotic regions in one pass.
template <double (*F)(double)>
void BM_Real(benchmark::State& state) {
    double acc = 0.0;
    for (auto _ : state) {
        for (double x = 0.05; x < 60.0; x += 0.37) acc += F(x);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 163);
}

void BM_Hankel1(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    std::complex<double> acc;
    for (auto _ : state) {
        for (double x = 0.05; x < 60.0; x += 0.37) acc += osm::specfun::hankel1(order, x);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 163);
}

}  // namespace

BENCHMARK(BM_Real<osm::specfun::bessel_j0>)->Name("bessel_j0");
BENCHMARK(BM_Real<osm::specfun::bessel_y1>)->Name("bessel_y1");
BENCHMARK(BM_Real<osm::specfun::spherical_j0>)->Name("spherical_j0");
BENCHMARK(BM_Hankel1)->Arg(0)->Arg(1);
