#include "osm/imaging.hpp"

#include "osm/errors.hpp"
#include "osm/specfun.hpp"

#include "parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace osm {
namespace {

constexpr double kPi = std::numbers::pi;

double apply_rho(cplx s, int rho) { return rho == 1 ? std::abs(s) : std::norm(s); }

void check_sampling_geometry(const MeasurementCurve& curve, const SamplingGrid& grid) {
    if (grid.n < 2 || grid.extent.empty()) throw GeometryError("sampling grid needs n >= 2");
    const double r = curve.descriptor.radius;
    for (const Vec2 corner : {grid.extent.min, grid.extent.max, Vec2{grid.extent.min.x, grid.extent.max.y},
                              Vec2{grid.extent.max.x, grid.extent.min.y}}) {
        if (!(norm(corner) < r)) {
            throw GeometryError("sampling domain is not strictly inside the measurement curve");
        }
    }
    // Nearest approach of the sampling box to the curve points.
    const double min_dist = 2.0 * grid.spacing();
    for (const Vec2 x : curve.points) {
        const Vec2 nearest{std::clamp(x.x, grid.extent.min.x, grid.extent.max.x),
                           std::clamp(x.y, grid.extent.min.y, grid.extent.max.y)};
        if (distance(nearest, x) < min_dist) {
            throw GeometryError("a measurement point lies within two cell sizes of the sampling grid");
        }
    }
}

ImagingResult make_result(const SamplingGrid& grid, std::vector<double> values,
                          const IndicatorParams& params, Provenance provenance) {
    ImagingResult result;
    result.grid = grid;
    result.values = std::move(values);
    result.provenance = std::move(provenance);
    result.degenerate = result.max_value() == 0.0;
    if (params.normalize) result = normalize(std::move(result));
    return result;
}

// sum_j w_j (d_nu ImPhi(x_j, z) a_j - ImPhi(x_j, z) b_j) for every z.
std::vector<cplx> boundary_pairing(const MeasurementCurve& curve, std::span<const cplx> a,
                                   std::span<const cplx> b, double k, int dimension,
                                   std::span<const Vec2> points) {
    std::vector<cplx> out(points.size());
    detail::parallel_for(points.size(), [&](std::size_t p) {
        const Vec2 z = points[p];
        cplx sum{};
        for (std::size_t j = 0; j < curve.size(); ++j) {
            const Vec2 d = curve.points[j] - z;
            const double r = norm(d);
            if (r == 0.0) throw DomainError("sampling point coincides with a measurement point");
            const double phi = im_phi(dimension, k, r);
            const double dphi = im_phi_radial_derivative(dimension, k, r) * dot(d, curve.normals[j]) / r;
            sum += curve.weights[j] * (dphi * a[j] - phi * b[j]);
        }
        out[p] = sum;
    });
    return out;
}

}  // namespace

Vec2 SamplingGrid::point(int col, int row) const {
    const double dx = extent.width() / (n - 1);
    const double dy = extent.height() / (n - 1);
    return {extent.min.x + col * dx, extent.max.y - row * dy};
}

std::vector<Vec2> SamplingGrid::points() const {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n) * n);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) pts.push_back(point(col, row));
    }
    return pts;
}

void IndicatorParams::validate() const {
    if (rho != 1 && rho != 2) throw std::invalid_argument("rho must be 1 or 2");
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("dimension must be 2 or 3");
}

double ImagingResult::max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double im_phi(int dimension, double k, double r) {
    if (r < 0.0) throw DomainError("im_phi: negative distance");
    if (dimension == 2) return specfun::bessel_j0(k * r);
    if (dimension == 3) return k / (4.0 * kPi) * specfun::spherical_j0(k * r);
    throw std::invalid_argument("im_phi: dimension must be 2 or 3");
}

double im_phi_radial_derivative(int dimension, double k, double r) {
    if (r < 0.0) throw DomainError("im_phi_radial_derivative: negative distance");
    if (dimension == 2) return -k * specfun::bessel_j1(k * r);
    if (dimension == 3) return k * k / (4.0 * kPi) * specfun::spherical_j0_derivative(k * r);
    throw std::invalid_argument("im_phi_radial_derivative: dimension must be 2 or 3");
}

double im_phi_normal_derivative(int dimension, double k, Vec2 x, Vec2 z, Vec2 nu) {
    const Vec2 d = x - z;
    const double r = norm(d);
    if (r == 0.0) throw DomainError("im_phi_normal_derivative: x == z");
    return im_phi_radial_derivative(dimension, k, r) * dot(d, nu) / r;
}

std::vector<double> indicator_nearfield_at(const CauchyData& data, std::span<const Vec2> points,
                                           const IndicatorParams& params) {
    params.validate();
    data.validate();
    const auto sums = boundary_pairing(data.curve, data.us, data.dus, data.k, params.dimension, points);
    std::vector<double> values(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) values[i] = apply_rho(sums[i], params.rho);
    return values;
}

ImagingResult indicator_nearfield(const CauchyData& data, const SamplingGrid& grid,
                                  const IndicatorParams& params) {
    params.validate();
    data.validate();
    check_sampling_geometry(data.curve, grid);
    const auto points = grid.points();
    return make_result(grid, indicator_nearfield_at(data, points, params), params,
                       {"nearfield", params.rho, data.k, data.curve.descriptor.describe()});
}

ImagingResult indicator_farfield(const MeasurementCurve& curve, std::span<const cplx> us, double k,
                                 const SamplingGrid& grid, const IndicatorParams& params) {
    params.validate();
    if (us.size() != curve.size()) throw GeometryError("scattered data length does not match curve");
    check_sampling_geometry(curve, grid);
    std::vector<cplx> dus(us.size());
    for (std::size_t j = 0; j < us.size(); ++j) dus[j] = cplx(0.0, k) * us[j];
    const auto points = grid.points();
    const auto sums = boundary_pairing(curve, us, dus, k, params.dimension, points);
    std::vector<double> values(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) values[i] = apply_rho(sums[i], params.rho);
    return make_result(grid, std::move(values), params,
                       {"farfield", params.rho, k, curve.descriptor.describe()});
}

bool covers_full_circle(const FarFieldPattern& ff) {
    const std::size_t m = ff.directions.size();
    if (m < 2 || ff.weights.size() != m) return false;
    double total = 0.0;
    for (double w : ff.weights) total += w;
    if (std::abs(total - 2.0 * kPi) > 1e-9) return false;
    for (std::size_t j = 0; j < m; ++j) {
        const double expected = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        const double angle = std::atan2(ff.directions[j].y, ff.directions[j].x);
        const double diff = std::remainder(angle - expected - std::atan2(ff.directions[0].y, ff.directions[0].x), 2.0 * kPi);
        if (std::abs(diff) > 1e-9) return false;
    }
    return true;
}

ImagingResult indicator_osm(const FarFieldPattern& ff, const SamplingGrid& grid,
                            const IndicatorParams& params) {
    params.validate();
    if (ff.values.size() != ff.directions.size() || ff.weights.size() != ff.directions.size()) {
        throw GeometryError("far-field pattern arrays have inconsistent lengths");
    }
    const auto points = grid.points();
    std::vector<double> values(points.size());
    detail::parallel_for(points.size(), [&](std::size_t p) {
        cplx sum{};
        for (std::size_t j = 0; j < ff.directions.size(); ++j) {
            const double phase = ff.k * dot(points[p], ff.directions[j]);
            sum += ff.weights[j] * cplx(std::cos(phase), std::sin(phase)) * ff.values[j];
        }
        values[p] = std::abs(sum);
    });
    std::string desc = std::to_string(ff.directions.size()) + " directions";
    if (!covers_full_circle(ff)) desc += " (partial coverage)";
    return make_result(grid, std::move(values), params, {"osm", 1, ff.k, desc});
}

double gamma_constant(int dimension, double k, int rho) {
    if (rho != 1 && rho != 2) throw std::invalid_argument("rho must be 1 or 2");
    if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
    double base;
    if (dimension == 2) {
        base = std::sqrt(kPi) / std::sqrt(2.0 * k);
    } else if (dimension == 3) {
        base = 4.0 * kPi / k;
    } else {
        throw std::invalid_argument("dimension must be 2 or 3");
    }
    return rho == 1 ? base : base * base;
}

ImagingResult normalize(ImagingResult result) {
    const double m = result.max_value();
    if (m == 0.0) {
        result.degenerate = true;
        return result;
    }
    for (double& v : result.values) v /= m;
    result.normalized = true;
    result.degenerate = false;
    return result;
}

PixelImage upsample_bilinear(const ImagingResult& result, int width) {
    if (width < 1) throw std::invalid_argument("upsample_bilinear: width must be positive");
    const SamplingGrid& g = result.grid;
    PixelImage out(width, width, g.extent);
    const double dx = g.extent.width() / (g.n - 1);
    const double dy = g.extent.height() / (g.n - 1);
    for (int row = 0; row < width; ++row) {
        for (int col = 0; col < width; ++col) {
            const Vec2 p = out.pixel_center(col, row);
            const double fc = std::clamp((p.x - g.extent.min.x) / dx, 0.0, g.n - 1.0);
            const double fr = std::clamp((g.extent.max.y - p.y) / dy, 0.0, g.n - 1.0);
            const int c0 = std::min(static_cast<int>(fc), g.n - 2);
            const int r0 = std::min(static_cast<int>(fr), g.n - 2);
            const double tc = fc - c0;
            const double tr = fr - r0;
            auto v = [&](int c, int r) { return result.values[static_cast<std::size_t>(r) * g.n + c]; };
            const double top = (1 - tc) * v(c0, r0) + tc * v(c0 + 1, r0);
            const double bottom = (1 - tc) * v(c0, r0 + 1) + tc * v(c0 + 1, r0 + 1);
            out.at(col, row) = static_cast<float>((1 - tr) * top + tr * bottom);
        }
    }
    return out;
}

PixelImage preliminary_image(const ImagingResult& result, int width) {
    PixelImage out = upsample_bilinear(result, width);
    const float m = *std::max_element(out.values.begin(), out.values.end());
    if (m > 0.0f) {
        for (float& v : out.values) v /= m;
    }
    return out;
}

PixelImage to_pixel_image(const ImagingResult& result) {
    const SamplingGrid& g = result.grid;
    const double half = 0.5 * g.spacing();
    PixelImage out(g.n, g.n, {g.extent.min - Vec2{half, half}, g.extent.max + Vec2{half, half}});
    for (std::size_t i = 0; i < result.values.size(); ++i) out.values[i] = static_cast<float>(result.values[i]);
    return out;
}

void write_imaging_result(const std::filesystem::path& osmi_path, const ImagingResult& result) {
    write_osmi(osmi_path, to_pixel_image(result));
    nlohmann::json side = {
        {"version", 1},
        {"indicator", result.provenance.indicator},
        {"rho", result.provenance.rho},
        {"k", result.provenance.k},
        {"data", result.provenance.data},
        {"normalized", result.normalized},
        {"degenerate", result.degenerate},
        {"grid",
         {{"n", result.grid.n},
          {"min", {result.grid.extent.min.x, result.grid.extent.min.y}},
          {"max", {result.grid.extent.max.x, result.grid.extent.max.y}}}},
    };
    auto sidecar = osmi_path;
    sidecar.replace_extension(".json");
    std::ofstream out(sidecar);
    if (!out) throw std::runtime_error("cannot write " + sidecar.string());
    out << side.dump(2) << '\n';
}

}  // namespace osm
