#include "osm/errors.hpp"
#include "osm/forward.hpp"
#include "osm/scene.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace osm;

namespace {

constexpr double kPi = std::numbers::pi;

ContrastScene disk_scene(double radius, Vec2 center = {}, double eta = 1.0) {
    ContrastScene s;
    s.shapes.push_back({{Disk{radius}, center, 0.0}, {eta, 0.0}});
    return s;
}

}  // namespace

TEST(Scene, ContainsExamples) {
    const ShapePrimitive unit{Disk{1.0}, {0.0, 0.0}, 0.0};
    EXPECT_TRUE(contains(unit, {0.0, 0.0}));
    EXPECT_FALSE(contains(unit, {3.0, 0.0}));
    const ShapePrimitive ellipse{Ellipse{1.0, 0.5}, {0.0, 0.0}, kPi / 2};
    EXPECT_TRUE(contains(ellipse, {0.0, 0.9}));
    EXPECT_FALSE(contains(ellipse, {0.9, 0.0}));
}

TEST(Scene, ContainsIsRotationCovariant) {
    Rng rng(11);
    const std::vector<ShapeGeometry> shapes{Ellipse{0.8, 0.3}, Rectangle{0.6, 0.2}, LShape{}, TShape{}, Peanut{}};
    for (const auto& g : shapes) {
        for (int trial = 0; trial < 200; ++trial) {
            const double angle = uniform(rng, 0.0, 2 * kPi);
            const Vec2 p{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
            const ShapePrimitive base{g, {0.0, 0.0}, 0.0};
            const ShapePrimitive turned{g, {0.0, 0.0}, angle};
            EXPECT_EQ(contains(base, p), contains(turned, rotate(p, angle)));
        }
    }
}

TEST(Scene, CompositeShapes) {
    const ShapePrimitive l{LShape{}, {0.0, 0.0}, 0.0};
    EXPECT_TRUE(contains(l, {-0.7, 0.7}));   // vertical bar
    EXPECT_TRUE(contains(l, {0.7, -0.7}));   // bottom bar
    EXPECT_FALSE(contains(l, {0.5, 0.5}));   // notch
    const ShapePrimitive t{TShape{}, {0.0, 0.0}, 0.0};
    EXPECT_TRUE(contains(t, {-0.7, 0.7}));   // top bar
    EXPECT_TRUE(contains(t, {0.0, -0.7}));   // stem
    EXPECT_FALSE(contains(t, {-0.7, -0.7}));
    const ShapePrimitive p{Peanut{1.0, 0.25}, {0.0, 0.0}, 0.0};
    EXPECT_TRUE(contains(p, {0.99, 0.0}));
    EXPECT_TRUE(contains(p, {0.0, 0.49}));
    EXPECT_FALSE(contains(p, {0.0, 0.51}));
}

TEST(Scene, ValidateRejectsBadInput) {
    EXPECT_THROW(validate(ShapePrimitive{Disk{0.0}, {}, 0.0}), std::invalid_argument);
    EXPECT_THROW(validate(ShapePrimitive{Ellipse{1.0, -1.0}, {}, 0.0}), std::invalid_argument);
    EXPECT_THROW(validate(ShapePrimitive{Disk{1.0}, {}, 2 * kPi}), std::invalid_argument);
    ContrastScene absorbing = disk_scene(0.5);
    absorbing.shapes[0].contrast = {-0.1, 0.0};
    EXPECT_THROW(validate(absorbing), std::invalid_argument);
    EXPECT_THROW(validate(disk_scene(0.5, {1.8, 0.0})), std::invalid_argument);
    EXPECT_NO_THROW(validate(disk_scene(0.5, {1.5, 0.0})));
}

TEST(Scene, RasterizeExamples) {
    EXPECT_EQ(rasterize(ContrastScene{}, 32).popcount(), 0u);
    const PixelImage disk = rasterize(disk_scene(1.0), 160);
    EXPECT_EQ(disk.width, 160);
    EXPECT_NEAR(static_cast<double>(disk.popcount()), 5026.0, 80.0);

    ContrastScene two = disk_scene(0.4, {0.5, 0.5});
    two.shapes.push_back({{Ellipse{0.9, 0.3}, {-0.4, 0.1}, 1.0}, {2.0, 0.0}});
    ContrastScene reversed = two;
    std::swap(reversed.shapes[0], reversed.shapes[1]);
    EXPECT_EQ(rasterize(two, 160), rasterize(reversed, 160));
}

TEST(Scene, RasterizeIsMonotone) {
    Rng rng(5);
    ContrastScene scene;
    PixelImage previous = rasterize(scene, 96);
    for (int i = 0; i < 5; ++i) {
        const ContrastScene extra = random_scene(rng, SceneFamily::OneEllipse);
        scene.shapes.push_back(extra.shapes.front());
        const PixelImage next = rasterize(scene, 96);
        for (std::size_t p = 0; p < next.values.size(); ++p) EXPECT_GE(next.values[p], previous.values[p]);
        previous = next;
    }
}

TEST(Scene, ResolutionConsistency) {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const ContrastScene scene = random_scene(rng, trial % 2 ? SceneFamily::TwoEllipse : SceneFamily::OneEllipse);
        const PixelImage coarse = rasterize(scene, 160);
        const PixelImage fine = rasterize(scene, 320);
        int differing = 0;
        for (int r = 0; r < 160; ++r) {
            for (int c = 0; c < 160; ++c) {
                const float pooled = std::max({fine.at(2 * c, 2 * r), fine.at(2 * c + 1, 2 * r),
                                               fine.at(2 * c, 2 * r + 1), fine.at(2 * c + 1, 2 * r + 1)});
                differing += pooled != coarse.at(c, r);
            }
        }
        EXPECT_LE(differing, 0.02 * 160 * 160);
    }
}

TEST(Scene, SampleContrastExamples) {
    const GridGeometry g = GridGeometry::cell(64, 4.0);
    const ContrastGrid empty = sample_contrast(ContrastScene{}, g);
    for (const auto& v : empty.eta) EXPECT_EQ(v, cplx{});

    const ContrastGrid disk = sample_contrast(disk_scene(1.0, {}, 0.5), g);
    // Node (32, 32) sits at the origin.
    EXPECT_EQ(g.node(32, 32).x, 0.0);
    EXPECT_EQ(disk.eta[32 * 64 + 32], cplx(0.5, 0.0));
    // Node (40, 32) sits at x = 1, exactly on the boundary: closed set.
    EXPECT_EQ(g.node(40, 32).x, 1.0);
    EXPECT_EQ(disk.eta[32 * 64 + 40], cplx(0.5, 0.0));
}

TEST(Scene, SampleContrastLastShapeWins) {
    ContrastScene scene = disk_scene(1.0, {}, 0.5);
    scene.shapes.push_back({{Disk{0.5}, {}, 0.0}, {2.0, 0.0}});
    const GridGeometry g = GridGeometry::cell(64, 4.0);
    EXPECT_EQ(sample_contrast(scene, g).eta[32 * 64 + 32], cplx(2.0, 0.0));
}

TEST(Scene, SampleContrastRequiresCoverage) {
    EXPECT_THROW(sample_contrast(disk_scene(1.0), GridGeometry::cell(64, 1.0)), GeometryError);
}

TEST(Scene, SupersampledContrastAveragesCells) {
    const GridGeometry g = GridGeometry::cell(64, 4.0);
    const ContrastGrid averaged = sample_contrast(disk_scene(1.0), g, 16);
    double area = 0.0;
    for (const auto& v : averaged.eta) {
        EXPECT_GE(v.real(), 0.0);
        EXPECT_LE(v.real(), 1.0);
        area += v.real() * g.h * g.h;
    }
    EXPECT_NEAR(area, kPi, 5e-3);
}

TEST(Scene, RandomSceneDeterministic) {
    Rng a(42), b(42);
    EXPECT_EQ(scene_to_json(random_scene(a, SceneFamily::TwoEllipse)),
              scene_to_json(random_scene(b, SceneFamily::TwoEllipse)));
}

TEST(Scene, RandomSceneRanges) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const ContrastScene one = random_scene(rng, SceneFamily::OneEllipse);
        ASSERT_EQ(one.shapes.size(), 1u);
        const auto& p = one.shapes[0].shape;
        const auto& e = std::get<Ellipse>(p.geometry);
        EXPECT_GE(p.center.x, -0.8);
        EXPECT_LE(p.center.x, 0.8);
        EXPECT_GE(p.center.y, -0.8);
        EXPECT_LE(p.center.y, 0.8);
        EXPECT_GE(e.a, 0.1);
        EXPECT_LE(e.a, 1.0);
        EXPECT_GE(e.b, 0.1);
        EXPECT_LE(e.b, 1.0);
        EXPECT_GE(p.rotation, 0.0);
        EXPECT_LT(p.rotation, 2 * kPi);
        EXPECT_NO_THROW(validate(one));
    }
    for (int i = 0; i < 1000; ++i) {
        const ContrastScene two = random_scene(rng, SceneFamily::TwoEllipse);
        ASSERT_EQ(two.shapes.size(), 2u);
        const auto& p = two.shapes[1].shape;
        const auto& e = std::get<Ellipse>(p.geometry);
        EXPECT_GE(p.center.x, -1.0);
        EXPECT_LE(p.center.x, 1.0);
        EXPECT_GE(e.a, 0.1);
        EXPECT_LE(e.a, 0.5);
        EXPECT_GE(e.b, 0.1);
        EXPECT_LE(e.b, 0.5);
    }
}

TEST(Scene, FamilyNames) {
    EXPECT_EQ(parse_family("one-ellipse"), SceneFamily::OneEllipse);
    EXPECT_EQ(family_name(SceneFamily::TwoEllipse), "two-ellipse");
    EXPECT_THROW(parse_family("three"), std::invalid_argument);
}

TEST(Scene, JsonRoundTripAllVariants) {
    ContrastScene s;
    s.shapes.push_back({{Ellipse{0.7, 0.2}, {0.1, -0.2}, 0.3}, {1.0, 0.25}});
    s.shapes.push_back({{Rectangle{0.3, 0.1}, {-0.5, 0.5}, 1.0}, {0.5, 0.0}});
    s.shapes.push_back({{Disk{0.2}, {0.9, 0.9}, 0.0}, {2.0, 0.0}});
    s.shapes.push_back({{LShape{1.0, 0.8, 0.2}, {0.0, 0.0}, 2.0}, {1.0, 0.0}});
    s.shapes.push_back({{TShape{0.9, 1.1, 0.3}, {0.2, 0.1}, 4.0}, {1.5, 0.0}});
    s.shapes.push_back({{Peanut{0.6, 0.3}, {-0.3, -0.3}, 5.0}, {0.75, 0.1}});
    const std::string text = scene_to_json(s);
    EXPECT_NE(text.find("\"version\""), std::string::npos);
    const ContrastScene back = scene_from_json(text);
    EXPECT_EQ(scene_to_json(back), text);
    EXPECT_EQ(rasterize(back, 80), rasterize(s, 80));
    EXPECT_THROW(scene_from_json("{\"version\": 2, \"shapes\": []}"), std::invalid_argument);
    EXPECT_THROW(scene_from_json("not json"), std::invalid_argument);
}
