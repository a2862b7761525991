#pragma once

#include "osm/forward.hpp"
#include "osm/imaging.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace osm {

struct Diagnostic {
    std::string label;
    double value = 0.0;
    double reference = 0.0;
    double error = 0.0;
};

struct CheckReport {
    std::string name;
    double max_error = 0.0;  // see error_kind
    double tolerance = 0.0;
    bool pass = false;
    std::string error_kind = "relative";  // "relative" or "absolute"
    std::string note;
    std::vector<Diagnostic> diagnostics;

    /// Sets pass from max_error <= tolerance.
    void finish();
    std::string to_json() const;
};

/// Constant-contrast disk centered at the origin, the reference scatterer of
/// the identity checks. The scene domain is the disk's bounding square so
/// the solver grid resolves the disk at the default N.
struct DiskScenario {
    double k = 6.0;
    double radius = 1.0;
    double eta = 1.0;
    double theta = 1.5707963267948966;  // 90 degrees
    SimulationOptions simulation;

    ContrastScene scene() const;
    Simulation solve() const;
};

/// |k^2 h^2 sum_j ImPhi(y_j, z) eta_j u_j|^rho over the solver grid, the
/// volume side of the Cauchy-data identity. Shares no code with the boundary
/// functional beyond the kernel itself.
double theorem1_rhs(const TotalField& total, const ContrastGrid& grid, Vec2 z,
                    const IndicatorParams& params = {});
std::vector<double> theorem1_rhs(const TotalField& total, const ContrastGrid& grid,
                                 std::span<const Vec2> points, const IndicatorParams& params = {});

struct Theorem1Options {
    CurveDescriptor curve;  // R = 100, 32 points
    SamplingGrid grid;      // 64^2 over [-2, 2]^2
    IndicatorParams params;
    double tolerance = 0.01;
};

/// Pointwise relative error between the boundary functional and the volume
/// oracle over the sampling grid.
CheckReport check_theorem1(const Simulation& sim, const Theorem1Options& options = {});

struct Theorem2Options {
    CurveDescriptor curve;
    SamplingGrid grid;
    IndicatorParams params;
    int directions = 128;
    double tolerance = 0.02;
    /// false: I = gamma |I_osm|^rho as printed. true: gamma I = |I_osm|^rho.
    bool reciprocal = false;
};

/// Relative error |I - gamma |I_osm|^rho| / |I| (or its reciprocal form),
/// maximized over the sampling grid.
CheckReport check_theorem2(const Simulation& sim, const Theorem2Options& options = {});

/// Rectangle rule for the unit-circle integral of exp(-i k x.zhat) against
/// 2 pi J0(k|x|). Absolute error; the imaginary part is reported as a
/// diagnostic.
CheckReport check_funk_hecke(double k, Vec2 x, int m_nodes, double tolerance = 1e-8);

/// Boundary term of the Helmholtz representation on the circle of radius R
/// for the plane wave of direction theta, compared with the wave at x.
CheckReport check_helmholtz_representation(double k, double radius, int m_nodes, Vec2 x,
                                           double theta = 1.5707963267948966,
                                           double tolerance = 1e-6);

/// Least-squares slope of log I against log distance through the local
/// maxima of I. Throws InsufficientDataError with fewer than 5 maxima.
double decay_fit(std::span<const double> distances, std::span<const double> values);

struct RayProfile {
    std::vector<double> distances;
    std::vector<double> values;
};

/// Indicator values along origin + (offset + d) * direction for `count`
/// values of d equispaced in [d_min, d_max].
RayProfile ray_profile(const CauchyData& data, Vec2 origin, Vec2 direction, double offset,
                       double d_min, double d_max, int count, const IndicatorParams& params);

struct DecayOptions {
    CurveDescriptor curve{CurveKind::Circle, 100.0, 2048};
    Vec2 direction{1.0, 0.0};
    double d_min = 5.0;
    double d_max = 50.0;
    int samples = 2000;
    IndicatorParams params;
    double relative_tolerance = 0.15;
};

/// Fitted envelope slope against -rho (n - 1) / 2 for the disk scenario.
CheckReport check_decay(const Simulation& sim, double disk_radius, const DecayOptions& options = {});

/// Relative L2 error of the solver's scattered field against the Mie series
/// on the measurement curve.
CheckReport check_forward_mie(const DiskScenario& scenario,
                              const CurveDescriptor& curve = {CurveKind::Circle, 100.0, 64},
                              double tolerance = 1e-3);

/// Combines reports into one named report (max of errors, all must pass).
CheckReport merge_reports(const std::string& name, std::span<const CheckReport> reports);

double pearson(std::span<const double> a, std::span<const double> b);

struct NoiseOptions {
    CurveDescriptor curve;
    SamplingGrid grid;
    IndicatorParams params;
    std::vector<double> deltas{0.05, 0.07, 0.10, 0.15};
    int seeds = 10;
    std::uint64_t seed = 2024;
    double min_correlation = 0.90;  // at the first delta
};

/// Mean Pearson correlation (over seeds) of noisy and clean normalized images
/// per delta. Passes when the first mean meets min_correlation and the means
/// never increase with delta.
CheckReport noise_stability(const Simulation& sim, const NoiseOptions& options = {});

}  // namespace osm
