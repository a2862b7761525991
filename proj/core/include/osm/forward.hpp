#pragma once

#include "osm/geometry.hpp"
#include "osm/scene.hpp"

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace osm {

using cplx = std::complex<double>;

/// Uniform N x N node lattice; node (i, j) sits at origin + (i h, j h) and is
/// stored at index j * N + i.
struct GridGeometry {
    int n = 256;
    double h = 8.0 / 256;
    Vec2 origin{-4.0, -4.0};

    Vec2 node(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    /// Last node coordinate along each axis.
    double extent() const { return (n - 1) * h; }
    /// Square periodization cell [-half, half)^2 with n nodes per side.
    static GridGeometry cell(int n, double half_width);
    /// Cell of side four times the half-width of `domain`, centered on it, so
    /// the domain occupies the central half.
    static GridGeometry for_domain(const Box& domain, int n);
};

/// Contrast eta sampled on the solver grid.
struct ContrastGrid {
    GridGeometry geometry;
    std::vector<cplx> eta;

    /// Throws GeometryError unless n is a power of two and every nonzero eta
    /// lies in the central half of the periodization cell.
    void validate() const;
    bool empty_support() const;
};

/// Samples eta on the grid (closed-set membership; the last listed shape wins
/// on overlaps). With supersample == 1 each node takes the value at the node
/// itself. With supersample == s > 1 each node takes the mean over an s x s
/// lattice of points inside its h x h cell, which makes the rectangle rule
/// second-order accurate across material interfaces. Throws GeometryError
/// when the grid does not cover the scene domain.
ContrastGrid sample_contrast(const ContrastScene& scene, const GridGeometry& geometry,
                             int supersample = 1);

/// Supersampling used by the simulation pipelines.
inline constexpr int kDefaultSupersample = 8;

struct TotalField {
    GridGeometry geometry;
    std::vector<cplx> u;
    double k = 0.0;
    double theta = 0.0;  // incident direction, radians
    int iterations = 0;
    std::vector<double> residual_history;
};

enum class CurveKind { Circle, Arc };

struct CurveDescriptor {
    CurveKind kind = CurveKind::Circle;
    double radius = 100.0;
    int count = 32;
    double start_deg = 0.0;  // arcs only; inclusive endpoints
    double end_deg = 360.0;

    std::string describe() const;
    friend bool operator==(const CurveDescriptor&, const CurveDescriptor&) = default;
};

/// Points, outward unit normals and rectangle-rule weights on the boundary of
/// the measurement domain.
struct MeasurementCurve {
    CurveDescriptor descriptor;
    std::vector<Vec2> points;
    std::vector<Vec2> normals;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    /// count equispaced points on the full circle, weights 2 pi R / count.
    static MeasurementCurve circle(double radius, int count);
    /// count points from start_deg to end_deg inclusive. Each point carries
    /// weight R * step; the arc is treated as an open aperture, not a closed
    /// curve.
    static MeasurementCurve arc(double radius, double start_deg, double end_deg, int count);
    static MeasurementCurve from_descriptor(const CurveDescriptor& d);
};

struct CauchyData {
    MeasurementCurve curve;
    std::vector<cplx> us;
    std::vector<cplx> dus;
    double k = 0.0;
    double theta = 0.0;

    void validate() const;
};

struct FarFieldPattern {
    std::vector<Vec2> directions;
    std::vector<double> weights;  // arc-length weights on the unit circle
    std::vector<cplx> values;
    double k = 0.0;

    /// count equispaced directions on S^1 with zero values.
    static FarFieldPattern uniform_directions(int count, double k);
};

std::vector<cplx> incident_plane_wave(double k, double theta, std::span<const Vec2> points);
cplx incident_plane_wave(double k, double theta, Vec2 point);

/// Outgoing free-space Green's function (i/4) H0(k|x - y|).
cplx green2d(double k, Vec2 x, Vec2 y);
/// grad_x Phi(x, y) . nu = -(i k / 4) H1(k|x-y|) (x-y).nu / |x-y|.
cplx green2d_normal_derivative(double k, Vec2 x, Vec2 y, Vec2 nu);

struct SolverOptions {
    double tolerance = 1e-6;  // relative residual
    int restart = 50;
    int max_iterations = 1000;
};

/// Lippmann-Schwinger solve u - k^2 V(eta u) = u_in with V the volume
/// potential discretized as a rectangle-rule convolution, applied by FFT,
/// and inverted by restarted GMRES. Throws SolverError on non-convergence.
TotalField ls_solve(const ContrastGrid& grid, double k, double theta,
                    const SolverOptions& options = {});

/// u_sc(x) = k^2 h^2 sum Phi(x, y_j) eta_j u_j. Every point must be at least
/// 2h away from the contrast support (AccuracyError otherwise).
std::vector<cplx> scattered_at(const TotalField& total, const ContrastGrid& grid,
                               std::span<const Vec2> points);
std::vector<cplx> scattered_normal_derivative(const TotalField& total, const ContrastGrid& grid,
                                              const MeasurementCurve& curve);
/// Values for the far-field pattern at `directions` (weights are kept).
FarFieldPattern far_field(const TotalField& total, const ContrastGrid& grid,
                          FarFieldPattern directions);
/// The far-field constant e^{i pi/4} / sqrt(8 pi k).
cplx far_field_constant(double k);

/// Scattered field and its normal derivative on `curve`.
CauchyData cauchy_data(const TotalField& total, const ContrastGrid& grid,
                       const MeasurementCurve& curve);

/// Separation-of-variables scattered field of a centered penetrable disk
/// (constant contrast) hit by the plane wave of direction theta. A
/// non-positive `order` selects the truncation automatically.
std::vector<cplx> mie_disk_reference(double k, double radius, double eta, double theta,
                                     std::span<const Vec2> points, int order = 0);
/// Far-field pattern of the same problem.
std::vector<cplx> mie_disk_far_field(double k, double radius, double eta, double theta,
                                     std::span<const Vec2> directions, int order = 0);

/// Contrast grid and total field of one scene, the input of every
/// downstream evaluation.
struct Simulation {
    ContrastGrid grid;
    TotalField total;
};

struct SimulationOptions {
    int n = 256;
    int supersample = kDefaultSupersample;
    SolverOptions solver;
};

/// Samples the scene on GridGeometry::for_domain(scene.domain, n) and solves.
Simulation simulate(const ContrastScene& scene, double k, double theta,
                    const SimulationOptions& options = {});

/// Writes `<stem>.json` (k, theta, curve descriptor, counts) and `<stem>.bin`
/// holding little-endian float64 (re, im) pairs of us followed by dus.
void write_cauchy_data(const std::filesystem::path& stem, const CauchyData& data);
/// Reads the pair written by write_cauchy_data. `path` may name the stem, the
/// header or the payload. Throws ParseError on malformed input.
CauchyData read_cauchy_data(const std::filesystem::path& path);

std::string curve_descriptor_to_json(const CurveDescriptor& d);
CurveDescriptor curve_descriptor_from_json(std::string_view text);

}  // namespace osm
