#include "osm/forward.hpp"
#include "osm/scene.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

osm::ContrastScene unit_disk() {
    osm::ContrastScene s;
    s.shapes.push_back({{osm::Disk{1.0}, {}, 0.0}, {1.0, 0.0}});
    return s;
}

void BM_SampleContrast(benchmark::State& state) {
    const auto scene = unit_disk();
    const auto geometry = osm::GridGeometry::for_domain(scene.domain, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(osm::sample_contrast(scene, geometry, osm::kDefaultSupersample));
}

void BM_LsSolve(benchmark::State& state) {
    const auto scene = unit_disk();
    const auto geometry = osm::GridGeometry::for_domain(scene.domain, static_cast<int>(state.range(0)));
    const auto grid = osm::sample_contrast(scene, geometry, osm::kDefaultSupersample);
    for (auto _ : state) benchmark::DoNotOptimize(osm::ls_solve(grid, 6.0, std::numbers::pi / 2));
}

void BM_CauchyData(benchmark::State& state) {
    osm::SimulationOptions options;
    options.n = 128;
    const auto sim = osm::simulate(unit_disk(), 6.0, std::numbers::pi / 2, options);
    const auto curve = osm::MeasurementCurve::circle(3.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(osm::cauchy_data(sim.total, sim.grid, curve));
}

}  // namespace

BENCHMARK(BM_SampleContrast)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LsSolve)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CauchyData)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
