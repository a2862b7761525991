#include "osm/scene.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("shape parameter '") + what +
                                    "' must be positive and finite");
    }
}

bool local_contains(const ShapeGeometry& g, Vec2 p) {
    return std::visit(
        overloaded{
            [&](const Ellipse& e) {
                const double u = p.x / e.a;
                const double v = p.y / e.b;
                return u * u + v * v <= 1.0;
            },
            [&](const Rectangle& r) {
                return std::abs(p.x) <= r.half_width && std::abs(p.y) <= r.half_height;
            },
            [&](const Disk& d) { return p.x * p.x + p.y * p.y <= d.radius * d.radius; },
            [&](const LShape& l) {
                const double hw = 0.5 * l.width;
                const double hh = 0.5 * l.height;
                if (std::abs(p.x) > hw || std::abs(p.y) > hh) return false;
                return p.x <= -hw + l.thickness || p.y <= -hh + l.thickness;
            },
            [&](const TShape& t) {
                const double hw = 0.5 * t.width;
                const double hh = 0.5 * t.height;
                if (std::abs(p.x) > hw || std::abs(p.y) > hh) return false;
                return p.y >= hh - t.thickness || std::abs(p.x) <= 0.5 * t.thickness;
            },
            [&](const Peanut& pn) {
                // |p| <= r(t)  <=>  |p|^4 <= a^2 (x^2 + c y^2)
                const double r2 = p.x * p.x + p.y * p.y;
                return r2 * r2 <= pn.scale * pn.scale * (p.x * p.x + pn.waist * p.y * p.y);
            },
        },
        g);
}

// Half extents of a local box that encloses the shape.
Vec2 local_half_extent(const ShapeGeometry& g) {
    return std::visit(
        overloaded{
            [](const Ellipse& e) { return Vec2{e.a, e.b}; },
            [](const Rectangle& r) { return Vec2{r.half_width, r.half_height}; },
            [](const Disk& d) { return Vec2{d.radius, d.radius}; },
            [](const LShape& l) { return Vec2{0.5 * l.width, 0.5 * l.height}; },
            [](const TShape& t) { return Vec2{0.5 * t.width, 0.5 * t.height}; },
            [](const Peanut& pn) {
                double ymax = 0.0;
                constexpr int samples = 2048;
                for (int i = 0; i < samples; ++i) {
                    const double t = kTwoPi * i / samples;
                    const double c = std::cos(t);
                    const double s = std::sin(t);
                    ymax = std::max(ymax, pn.scale * std::sqrt(c * c + pn.waist * s * s) *
                                              std::abs(s));
                }
                return Vec2{pn.scale, std::min(pn.scale, ymax * 1.001)};
            },
        },
        g);
}

std::array<double, 2> to_pair(Vec2 v) { return {v.x, v.y}; }
Vec2 from_pair(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

std::string_view variant_name(const ShapeGeometry& g) {
    return std::visit(overloaded{
                          [](const Ellipse&) { return std::string_view("ellipse"); },
                          [](const Rectangle&) { return std::string_view("rectangle"); },
                          [](const Disk&) { return std::string_view("disk"); },
                          [](const LShape&) { return std::string_view("l-shape"); },
                          [](const TShape&) { return std::string_view("t-shape"); },
                          [](const Peanut&) { return std::string_view("peanut"); },
                      },
                      g);
}

void validate(const ShapePrimitive& shape) {
    std::visit(overloaded{
                   [](const Ellipse& e) {
                       require_positive(e.a, "a");
                       require_positive(e.b, "b");
                   },
                   [](const Rectangle& r) {
                       require_positive(r.half_width, "half_width");
                       require_positive(r.half_height, "half_height");
                   },
                   [](const Disk& d) { require_positive(d.radius, "radius"); },
                   [](const LShape& l) {
                       require_positive(l.width, "width");
                       require_positive(l.height, "height");
                       require_positive(l.thickness, "thickness");
                       if (l.thickness >= std::min(l.width, l.height)) {
                           throw std::invalid_argument("l-shape thickness exceeds arm size");
                       }
                   },
                   [](const TShape& t) {
                       require_positive(t.width, "width");
                       require_positive(t.height, "height");
                       require_positive(t.thickness, "thickness");
                       if (t.thickness >= std::min(t.width, t.height)) {
                           throw std::invalid_argument("t-shape thickness exceeds arm size");
                       }
                   },
                   [](const Peanut& p) {
                       require_positive(p.scale, "scale");
                       require_positive(p.waist, "waist");
                       if (p.waist >= 1.0) {
                           throw std::invalid_argument("peanut waist ratio must lie in (0, 1)");
                       }
                   },
               },
               shape.geometry);
    if (!(shape.rotation >= 0.0 && shape.rotation < kTwoPi)) {
        throw std::invalid_argument("shape rotation must lie in [0, 2 pi)");
    }
}

bool contains(const ShapePrimitive& shape, Vec2 p) {
    const Vec2 local = rotate(p - shape.center, -shape.rotation);
    return local_contains(shape.geometry, local);
}

Box bounding_box(const ShapePrimitive& shape) {
    const double c = std::cos(shape.rotation);
    const double s = std::sin(shape.rotation);
    Vec2 half;
    if (const auto* e = std::get_if<Ellipse>(&shape.geometry)) {
        half = {std::sqrt(e->a * e->a * c * c + e->b * e->b * s * s),
                std::sqrt(e->a * e->a * s * s + e->b * e->b * c * c)};
    } else if (const auto* d = std::get_if<Disk>(&shape.geometry)) {
        half = {d->radius, d->radius};
    } else {
        const Vec2 h = local_half_extent(shape.geometry);
        half = {std::abs(c) * h.x + std::abs(s) * h.y, std::abs(s) * h.x + std::abs(c) * h.y};
    }
    return {shape.center - half, shape.center + half};
}

std::complex<double> ContrastScene::contrast_at(Vec2 p) const {
    for (auto it = shapes.rbegin(); it != shapes.rend(); ++it) {
        if (contains(it->shape, p)) return it->contrast;
    }
    return {0.0, 0.0};
}

bool ContrastScene::inside_any(Vec2 p) const {
    return std::any_of(shapes.begin(), shapes.end(),
                       [&](const SceneShape& s) { return contains(s.shape, p); });
}

Box ContrastScene::support_box() const {
    if (shapes.empty()) return {};
    Box box = bounding_box(shapes.front().shape);
    for (const auto& s : shapes) {
        const Box b = bounding_box(s.shape);
        box.min = {std::min(box.min.x, b.min.x), std::min(box.min.y, b.min.y)};
        box.max = {std::max(box.max.x, b.max.x), std::max(box.max.y, b.max.y)};
    }
    return box;
}

void validate(const ContrastScene& scene) {
    if (scene.domain.empty()) throw std::invalid_argument("scene domain is empty");
    for (const auto& s : scene.shapes) {
        validate(s.shape);
        if (s.contrast.real() < 0.0) {
            throw std::invalid_argument("contrast must satisfy Re(eta) >= 0");
        }
        if (!scene.domain.contains(bounding_box(s.shape))) {
            throw std::invalid_argument(std::string("shape '") +
                                        std::string(variant_name(s.shape.geometry)) +
                                        "' extends outside the scene domain");
        }
    }
}

PixelImage rasterize(const ContrastScene& scene, int resolution) {
    if (resolution < 2) throw std::invalid_argument("rasterize: resolution must be >= 2");
    PixelImage img(resolution, resolution, scene.domain);
    for (int row = 0; row < resolution; ++row) {
        for (int col = 0; col < resolution; ++col) {
            if (scene.inside_any(img.pixel_center(col, row))) img.at(col, row) = 1.0f;
        }
    }
    return img;
}

std::string_view family_name(SceneFamily family) {
    return family == SceneFamily::OneEllipse ? "one-ellipse" : "two-ellipse";
}

SceneFamily parse_family(std::string_view name) {
    if (name == "one-ellipse") return SceneFamily::OneEllipse;
    if (name == "two-ellipse") return SceneFamily::TwoEllipse;
    throw std::invalid_argument("unknown scene family: " + std::string(name));
}

std::complex<double> ContrastDistribution::draw(Rng& rng) const {
    if (max < min || min < 0.0) {
        throw std::invalid_argument("contrast distribution needs 0 <= min <= max");
    }
    if (min == max) return {min, 0.0};
    return {uniform(rng, min, max), 0.0};
}

ContrastScene random_scene(Rng& rng, SceneFamily family, const ContrastDistribution& contrast) {
    auto draw_ellipse = [&](double center_half, double radius_lo, double radius_hi) {
        ShapePrimitive p;
        p.center = {uniform(rng, -center_half, center_half), uniform(rng, -center_half, center_half)};
        p.geometry = Ellipse{uniform(rng, radius_lo, radius_hi), uniform(rng, radius_lo, radius_hi)};
        p.rotation = uniform(rng, 0.0, kTwoPi);
        return SceneShape{p, contrast.draw(rng)};
    };
    ContrastScene scene;
    scene.shapes.push_back(draw_ellipse(0.8, 0.1, 1.0));
    if (family == SceneFamily::TwoEllipse) scene.shapes.push_back(draw_ellipse(1.0, 0.1, 0.5));
    return scene;
}

std::string scene_to_json(const ContrastScene& scene) {
    using nlohmann::json;
    json shapes = json::array();
    for (const auto& s : scene.shapes) {
        json j;
        j["variant"] = std::string(variant_name(s.shape.geometry));
        j["center"] = to_pair(s.shape.center);
        j["rotation"] = s.shape.rotation;
        j["contrast"] = {{"re", s.contrast.real()}, {"im", s.contrast.imag()}};
        std::visit(overloaded{
                       [&](const Ellipse& e) { j["a"] = e.a; j["b"] = e.b; },
                       [&](const Rectangle& r) {
                           j["half_width"] = r.half_width;
                           j["half_height"] = r.half_height;
                       },
                       [&](const Disk& d) { j["radius"] = d.radius; },
                       [&](const LShape& l) {
                           j["width"] = l.width;
                           j["height"] = l.height;
                           j["thickness"] = l.thickness;
                       },
                       [&](const TShape& t) {
                           j["width"] = t.width;
                           j["height"] = t.height;
                           j["thickness"] = t.thickness;
                       },
                       [&](const Peanut& p) { j["scale"] = p.scale; j["waist"] = p.waist; },
                   },
                   s.shape.geometry);
        shapes.push_back(std::move(j));
    }
    json doc = {{"version", 1},
                {"domain", {{"min", to_pair(scene.domain.min)}, {"max", to_pair(scene.domain.max)}}},
                {"shapes", shapes}};
    return doc.dump(2);
}

ContrastScene scene_from_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scene JSON: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != 1) {
            throw std::invalid_argument("scene JSON: unsupported version");
        }
        ContrastScene scene;
        if (doc.contains("domain")) {
            scene.domain = {from_pair(doc["domain"].at("min")), from_pair(doc["domain"].at("max"))};
        }
        for (const auto& j : doc.at("shapes")) {
            SceneShape s;
            const auto variant = j.at("variant").get<std::string>();
            s.shape.center = from_pair(j.at("center"));
            s.shape.rotation = j.value("rotation", 0.0);
            if (j.contains("contrast")) {
                s.contrast = {j["contrast"].value("re", 0.0), j["contrast"].value("im", 0.0)};
            }
            if (variant == "ellipse") {
                s.shape.geometry = Ellipse{j.at("a").get<double>(), j.at("b").get<double>()};
            } else if (variant == "rectangle") {
                s.shape.geometry = Rectangle{j.at("half_width").get<double>(),
                                             j.at("half_height").get<double>()};
            } else if (variant == "disk") {
                s.shape.geometry = Disk{j.at("radius").get<double>()};
            } else if (variant == "l-shape") {
                LShape l;
                l.width = j.value("width", l.width);
                l.height = j.value("height", l.height);
                l.thickness = j.value("thickness", l.thickness);
                s.shape.geometry = l;
            } else if (variant == "t-shape") {
                TShape t;
                t.width = j.value("width", t.width);
                t.height = j.value("height", t.height);
                t.thickness = j.value("thickness", t.thickness);
                s.shape.geometry = t;
            } else if (variant == "peanut") {
                Peanut p;
                p.scale = j.value("scale", p.scale);
                p.waist = j.value("waist", p.waist);
                s.shape.geometry = p;
            } else {
                throw std::invalid_argument("scene JSON: unknown variant '" + variant + "'");
            }
            scene.shapes.push_back(s);
        }
        validate(scene);
        return scene;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scene JSON: ") + e.what());
    }
}

}  // namespace osm
