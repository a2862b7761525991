#include "common.hpp"

#include "osm/forward.hpp"
#include "osm/scene.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

namespace osm::cli {

void add_simulate(CLI::App& app, SimulateArgs& a) {
    app.add_option("--scene", a.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
    app.add_option("--k", a.k, "Wave number (1/length)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--theta-deg", a.theta_deg, "Incident direction (degrees)")->capture_default_str();
    app.add_option("--curve-radius", a.curve_radius, "Measurement circle radius (length)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--curve-count", a.curve_count, "Measurement points (count)")
        ->capture_default_str()
        ->check(CLI::Range(2, 1 << 20));
    app.add_flag("--arc", a.arc, "Measure on an arc instead of the full circle");
    app.add_option("--arc-start-deg", a.arc_start_deg, "Arc start angle (degrees)")->capture_default_str();
    app.add_option("--arc-end-deg", a.arc_end_deg, "Arc end angle (degrees, inclusive)")->capture_default_str();
    app.add_option("--grid-n", a.grid_n, "Solver grid points per side (power of two)")->capture_default_str();
    app.add_option("--supersample", a.supersample, "Contrast sub-samples per cell side (count)")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    app.add_option("--tolerance", a.tolerance, "GMRES relative residual (dimensionless)")->capture_default_str();
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
}

int run_simulate(const SimulateArgs& a) {
    std::ifstream in(a.scene);
    std::stringstream text;
    text << in.rdbuf();
    const ContrastScene scene = scene_from_json(text.str());
    validate(scene);

    CurveDescriptor curve;
    curve.radius = a.curve_radius;
    curve.count = a.curve_count;
    if (a.arc) {
        curve.kind = CurveKind::Arc;
        curve.start_deg = a.arc_start_deg;
        curve.end_deg = a.arc_end_deg;
    }

    const std::filesystem::path out = a.out;
    write_resolved(out, {{"command", "simulate"},
                         {"scene", a.scene},
                         {"k", a.k},
                         {"theta-deg", a.theta_deg},
                         {"curve", nlohmann::json::parse(curve_descriptor_to_json(curve))},
                         {"grid-n", a.grid_n},
                         {"supersample", a.supersample},
                         {"tolerance", a.tolerance},
                         {"out", a.out}});

    if (scene.shapes.empty()) warn("scene has no shapes; the scattered field is identically zero");
    SimulationOptions options;
    options.n = a.grid_n;
    options.supersample = a.supersample;
    options.solver.tolerance = a.tolerance;
    const Simulation sim = simulate(scene, a.k, a.theta_deg * std::numbers::pi / 180.0, options);
    const CauchyData data = cauchy_data(sim.total, sim.grid, MeasurementCurve::from_descriptor(curve));
    write_cauchy_data(out / "cauchy", data);
    info("wrote " + (out / "cauchy.json").string() + " (" + std::to_string(sim.total.iterations) +
         " GMRES iterations)");
    return kOk;
}

}  // namespace osm::cli
