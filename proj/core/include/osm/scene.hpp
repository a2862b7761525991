#pragma once

#include "osm/geometry.hpp"
#include "osm/image.hpp"
#include "osm/random.hpp"

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace osm {

struct Ellipse {
    double a = 1.0;  // semi-axis along the local x direction
    double b = 0.5;
};

struct Rectangle {
    double half_width = 0.5;
    double half_height = 0.25;
};

struct Disk {
    double radius = 1.0;
};

/// Union of a vertical bar on the left and a horizontal bar at the bottom of
/// a width x height box centered at the local origin.
struct LShape {
    double width = 1.5;
    double height = 1.5;
    double thickness = 0.5;
};

/// Union of a full-width bar at the top and a centered vertical stem.
struct TShape {
    double width = 1.5;
    double height = 1.5;
    double thickness = 0.5;
};

/// Polar boundary r(t) = scale * sqrt(cos^2 t + waist * sin^2 t).
struct Peanut {
    double scale = 1.0;
    double waist = 0.25;
};

using ShapeGeometry = std::variant<Ellipse, Rectangle, Disk, LShape, TShape, Peanut>;

struct ShapePrimitive {
    ShapeGeometry geometry;
    Vec2 center;
    double rotation = 0.0;  // radians, counter-clockwise, in [0, 2 pi)
};

/// Throws std::invalid_argument when a size parameter is not positive or the
/// rotation lies outside [0, 2 pi).
void validate(const ShapePrimitive& shape);

std::string_view variant_name(const ShapeGeometry& g);

/// Closed-set membership test in world coordinates.
bool contains(const ShapePrimitive& shape, Vec2 p);

/// Axis-aligned box enclosing the shape (exact for ellipses and disks,
/// conservative otherwise).
Box bounding_box(const ShapePrimitive& shape);

struct SceneShape {
    ShapePrimitive shape;
    std::complex<double> contrast{1.0, 0.0};
};

struct ContrastScene {
    std::vector<SceneShape> shapes;
    Box domain = Box::square(2.0);

    /// Contrast at p; the last listed shape containing p wins, zero outside.
    std::complex<double> contrast_at(Vec2 p) const;
    bool inside_any(Vec2 p) const;
    /// Bounding box of all shapes; empty box when the scene has no shapes.
    Box support_box() const;
};

/// Checks Re(eta) >= 0 and that every shape's bounding box lies in the domain.
void validate(const ContrastScene& scene);

/// Binary mask sampled at the pixel centers of `scene.domain`.
PixelImage rasterize(const ContrastScene& scene, int resolution);

enum class SceneFamily { OneEllipse, TwoEllipse };

std::string_view family_name(SceneFamily family);
SceneFamily parse_family(std::string_view name);

/// Real contrast drawn uniformly from [min, max]; min == max is a fixed value.
struct ContrastDistribution {
    double min = 1.0;
    double max = 1.0;

    std::complex<double> draw(Rng& rng) const;
};

/// Random ellipse scene used for training data. One ellipse: center in
/// [-0.8, 0.8]^2 and semi-axes in [0.1, 1]. The optional second ellipse has
/// center in [-1, 1]^2 and semi-axes in [0.1, 0.5].
ContrastScene random_scene(Rng& rng, SceneFamily family,
                           const ContrastDistribution& contrast = {});

// Versioned JSON document ("version": 1).
std::string scene_to_json(const ContrastScene& scene);
ContrastScene scene_from_json(std::string_view text);

}  // namespace osm
