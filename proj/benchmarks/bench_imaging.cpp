#include "osm/forward.hpp"
#include "osm/imaging.hpp"
#include "osm/scene.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

const osm::CauchyData& disk_data() {
    static const osm::CauchyData data = [] {
        osm::ContrastScene s;
        s.shapes.push_back({{osm::Disk{0.5}, {0.4, -0.2}, 0.0}, {1.0, 0.0}});
        osm::SimulationOptions options;
        options.n = 128;
        const auto sim = osm::simulate(s, 6.0, std::numbers::pi / 2, options);
        return osm::cauchy_data(sim.total, sim.grid, osm::MeasurementCurve::circle(10.0, 128));
    }();
    return data;
}

void BM_IndicatorNearfield(benchmark::State& state) {
    const auto& data = disk_data();
    const osm::SamplingGrid grid{osm::Box::square(2.0), static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(osm::indicator_nearfield(data, grid, {}));
    state.SetItemsProcessed(state.iterations() * grid.n * grid.n);
}

}  // namespace

BENCHMARK(BM_IndicatorNearfield)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
