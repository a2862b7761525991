#include "osm/errors.hpp"
#include "osm/imaging.hpp"
#include "osm/specfun.hpp"

#include "series.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace osm;

namespace {

constexpr double kPi = std::numbers::pi;

ContrastScene disk(double radius, Vec2 center = {}, double eta = 1.0) {
    ContrastScene s;
    s.shapes.push_back({{Disk{radius}, center, 0.0}, {eta, 0.0}});
    return s;
}

const Simulation& mie_case() {
    static const Simulation sim = simulate(disk(1.0), 6.0, kPi / 2);
    return sim;
}

const CauchyData& mie_data() {
    static const CauchyData data =
        cauchy_data(mie_case().total, mie_case().grid, MeasurementCurve::circle(100.0, 32));
    return data;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST(Imaging, ImPhiExamples) {
    EXPECT_EQ(im_phi(2, 3.7, 0.0), 1.0);
    EXPECT_NEAR(im_phi(3, 6.0, 0.0), 6.0 / (4 * kPi), 1e-15);
    EXPECT_NEAR(im_phi(3, 6.0, 0.0), 0.477465, 1e-6);
    EXPECT_NEAR(im_phi(2, 6.0, 2.404825557695773 / 6.0), 0.0, 1e-9);
}

TEST(Imaging, ImPhiNormalDerivative) {
    EXPECT_NEAR(im_phi_normal_derivative(2, 6.0, {1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}), 0.0, 1e-14);
    // First J1 root, located by bisection on the series oracle.
    const double j1_root = static_cast<double>(
        osm::testing::bisect([](long double x) { return osm::testing::series_j(1, x); }, 3.5L, 4.0L));
    EXPECT_NEAR(j1_root, 3.8317059702075125, 1e-12);
    EXPECT_NEAR(im_phi_normal_derivative(2, 6.0, {j1_root / 6.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}), 0.0, 1e-9);

    Rng rng(4);
    const double h = 1e-6;
    for (int dim : {2, 3}) {
        for (int i = 0; i < 50; ++i) {
            const double k = uniform(rng, 1.0, 10.0);
            const Vec2 x{uniform(rng, -3, 3), uniform(rng, -3, 3)};
            const Vec2 z{uniform(rng, -3, 3), uniform(rng, -3, 3)};
            if (distance(x, z) < 0.2) continue;
            const Vec2 nu = unit_vector(uniform(rng, 0, 2 * kPi));
            const double fd = (im_phi(dim, k, distance(x + h * nu, z)) - im_phi(dim, k, distance(x - h * nu, z))) / (2 * h);
            EXPECT_NEAR(im_phi_normal_derivative(dim, k, x, z, nu), fd, 1e-7);
        }
    }
}

TEST(Imaging, ParamsValidation) {
    EXPECT_THROW((IndicatorParams{3, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((IndicatorParams{2, 4}.validate()), std::invalid_argument);
}

TEST(Imaging, ZeroDataIsDegenerate) {
    CauchyData zero;
    zero.curve = MeasurementCurve::circle(100.0, 32);
    zero.us.assign(32, cplx{});
    zero.dus.assign(32, cplx{});
    zero.k = 6.0;
    const ImagingResult r = indicator_nearfield(zero, SamplingGrid{Box::square(2.0), 16}, {2, 2, true});
    EXPECT_TRUE(r.degenerate);
    for (double v : r.values) EXPECT_EQ(v, 0.0);
    const ImagingResult f = indicator_farfield(zero.curve, zero.us, 6.0, SamplingGrid{Box::square(2.0), 16});
    for (double v : f.values) EXPECT_EQ(v, 0.0);
    FarFieldPattern ff = FarFieldPattern::uniform_directions(16, 6.0);
    ff.values.assign(16, cplx{});
    for (double v : indicator_osm(ff, SamplingGrid{Box::square(2.0), 8}).values) EXPECT_EQ(v, 0.0);
}

TEST(Imaging, SmallDiskIsLocated) {
    const ContrastScene scene = disk(0.3, {0.5, 0.0});
    const Simulation sim = simulate(scene, 6.0, kPi / 2);
    const CauchyData data = cauchy_data(sim.total, sim.grid, MeasurementCurve::circle(100.0, 32));
    const SamplingGrid grid;
    const ImagingResult r = indicator_nearfield(data, grid, {2, 2, true});
    EXPECT_TRUE(r.normalized);
    EXPECT_DOUBLE_EQ(r.max_value(), 1.0);
    const Vec2 peak = grid.points()[argmax(r.values)];
    EXPECT_LE(distance(peak, {0.5, 0.0}), 0.3) << peak.x << ", " << peak.y;
}

TEST(Imaging, FarFieldVariantTracksNearField) {
    const SamplingGrid grid{Box::square(2.0), 32};
    const auto& data = mie_data();
    const ImagingResult near = indicator_nearfield(data, grid);
    const ImagingResult far = indicator_farfield(data.curve, data.us, data.k, grid);
    EXPECT_EQ(far.provenance.indicator, "farfield");
    EXPECT_LE(max_abs_diff(near.values, far.values) / near.max_value(), 0.03);
}

TEST(Imaging, ArcInputProducesFiniteImage) {
    const MeasurementCurve arc = MeasurementCurve::arc(19.0, 60.0, 300.0, 49);
    const auto us = scattered_at(mie_case().total, mie_case().grid, arc.points);
    const ImagingResult r = indicator_farfield(arc, us, 6.0, SamplingGrid{Box::square(1.0), 24});
    for (double v : r.values) EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(r.max_value(), 0.0);
}

TEST(Imaging, OsmSingleDirectionIsConstant) {
    FarFieldPattern ff;
    ff.k = 6.0;
    ff.directions = {{1.0, 0.0}};
    ff.weights = {0.5};
    ff.values = {cplx(3.0, 4.0)};
    const ImagingResult r = indicator_osm(ff, SamplingGrid{Box::square(2.0), 8});
    for (double v : r.values) EXPECT_NEAR(v, 2.5, 1e-14);
    EXPECT_NE(r.provenance.data.find("partial"), std::string::npos);
    EXPECT_TRUE(covers_full_circle(FarFieldPattern::uniform_directions(128, 6.0)));
}

TEST(Imaging, GammaConstant) {
    EXPECT_NEAR(gamma_constant(2, 6.0, 2), kPi / 12, 1e-15);
    EXPECT_NEAR(gamma_constant(2, 6.0, 2), 0.2617994, 1e-7);
    EXPECT_NEAR(gamma_constant(3, 4 * kPi, 1), 1.0, 1e-15);
    for (double k : {0.5, 3.0, 17.0}) {
        EXPECT_NEAR(std::pow(gamma_constant(2, k, 1), 2), gamma_constant(2, k, 2), 1e-15);
    }
}

TEST(Imaging, NormalizeAndUpsample) {
    ImagingResult c;
    c.grid = SamplingGrid{Box::square(2.0), 8};
    c.values.assign(64, 0.4);
    const ImagingResult n = normalize(c);
    for (double v : n.values) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(normalize(n).values, n.values);
    const PixelImage up = upsample_bilinear(c, 160);
    EXPECT_EQ(up.width, 160);
    for (float v : up.values) EXPECT_FLOAT_EQ(v, 0.4f);
    ImagingResult zero = c;
    zero.values.assign(64, 0.0);
    EXPECT_TRUE(normalize(zero).degenerate);
}

TEST(Imaging, NormalizeIdempotentOnRealImage) {
    const ImagingResult r = normalize(indicator_nearfield(mie_data(), SamplingGrid{Box::square(2.0), 16}));
    EXPECT_EQ(normalize(r).values, r.values);
}

TEST(Imaging, PreliminaryImageHasUnitMax) {
    const ImagingResult r = indicator_nearfield(mie_data(), SamplingGrid{}, {2, 2, true});
    const PixelImage img = preliminary_image(r, 160);
    EXPECT_EQ(*std::max_element(img.values.begin(), img.values.end()), 1.0f);
    EXPECT_GE(*std::min_element(img.values.begin(), img.values.end()), 0.0f);
}

TEST(Imaging, ScalingInvariance) {
    const SamplingGrid grid{Box::square(2.0), 24};
    const ImagingResult base = indicator_nearfield(mie_data(), grid, {2, 2, true});
    CauchyData scaled = mie_data();
    const cplx c(-3.5, 1.25);
    for (auto& v : scaled.us) v *= c;
    for (auto& v : scaled.dus) v *= c;
    for (int rho : {1, 2}) {
        const ImagingResult a = indicator_nearfield(mie_data(), grid, {rho, 2, true});
        const ImagingResult b = indicator_nearfield(scaled, grid, {rho, 2, true});
        EXPECT_LE(max_abs_diff(a.values, b.values), 1e-12);
    }
    EXPECT_TRUE(base.normalized);
}

TEST(Imaging, RhoConsistency) {
    const SamplingGrid grid{Box::square(2.0), 24};
    const ImagingResult one = indicator_nearfield(mie_data(), grid, {1});
    const ImagingResult two = indicator_nearfield(mie_data(), grid, {2});
    for (std::size_t i = 0; i < one.values.size(); ++i) {
        EXPECT_NEAR(two.values[i], one.values[i] * one.values[i], 1e-12 * two.max_value());
    }
}

TEST(Imaging, GeometryErrors) {
    const auto& data = mie_data();
    EXPECT_THROW(indicator_nearfield(data, SamplingGrid{Box::square(2.0), 1}), GeometryError);
    EXPECT_THROW(indicator_nearfield(data, SamplingGrid{Box::square(80.0), 8}), GeometryError);
    CauchyData near_curve = data;
    near_curve.curve = MeasurementCurve::circle(2.1, 32);
    EXPECT_THROW(indicator_nearfield(near_curve, SamplingGrid{Box::square(1.45), 8}), GeometryError);
}

TEST(Imaging, ParallelMatchesPointwise) {
    const SamplingGrid grid{Box::square(2.0), 20};
    const ImagingResult r = indicator_nearfield(mie_data(), grid);
    const auto points = grid.points();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::vector<Vec2> one{points[i]};
        EXPECT_EQ(indicator_nearfield_at(mie_data(), one)[0], r.values[i]);
    }
    EXPECT_EQ(indicator_nearfield(mie_data(), grid).values, r.values);
}

TEST(Imaging, WritesOsmiWithSidecar) {
    const auto dir = std::filesystem::temp_directory_path() / "osm_test_imaging";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const ImagingResult r = indicator_nearfield(mie_data(), SamplingGrid{Box::square(2.0), 16});
    write_imaging_result(dir / "img.osmi", r);
    const PixelImage back = read_osmi(dir / "img.osmi");
    EXPECT_EQ(back.width, 16);
    EXPECT_EQ(back.values[5], static_cast<float>(r.values[5]));
    std::ifstream side(dir / "img.json");
    std::string text((std::istreambuf_iterator<char>(side)), std::istreambuf_iterator<char>());
    EXPECT_NE(text.find("\"nearfield\""), std::string::npos);
    EXPECT_NE(text.find("\"rho\": 2"), std::string::npos);
}
