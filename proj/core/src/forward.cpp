#include "osm/forward.hpp"

#include "osm/errors.hpp"
#include "osm/specfun.hpp"

#include "fft2d.hpp"
#include "gmres.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace osm {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Origin weight of the corrected trapezoidal rule for Phi on the lattice hZ^2.
// Phi = A(r) log r + B(r) with A(0) = -1/(2 pi) and
// B(0) = i/4 - (log(k/2) + gamma)/(2 pi); the punctured lattice sum of the
// log part is completed by log h + Z'(0)/2, where Z is the Epstein zeta
// function of Z^2, Z'(0) = -2 log(2 pi) - 2 log(Gamma(1/4)^2 / (2^{3/2} pi)).
// This removes the O(h^2) error of the punctured rule at smooth densities.
cplx lattice_self_weight(double k, double h) {
    constexpr double kEulerGamma = 0.57721566490153286061;
    constexpr double kHalfEpsteinZetaPrime = -1.3105329259115095;
    const double log_part = -(std::log(h) + kHalfEpsteinZetaPrime) / (2.0 * kPi);
    return {log_part - (std::log(0.5 * k) + kEulerGamma) / (2.0 * kPi), 0.25};
}

struct Support {
    std::vector<std::size_t> index;
    std::vector<Vec2> nodes;
    Box box;
};

Support support_of(const ContrastGrid& grid) {
    Support s;
    const auto& g = grid.geometry;
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * g.n + i;
            if (grid.eta[idx] != cplx{}) {
                s.index.push_back(idx);
                s.nodes.push_back(g.node(i, j));
            }
        }
    }
    if (!s.nodes.empty()) {
        s.box = {s.nodes.front(), s.nodes.front()};
        for (const Vec2 p : s.nodes) {
            s.box.min = {std::min(s.box.min.x, p.x), std::min(s.box.min.y, p.y)};
            s.box.max = {std::max(s.box.max.x, p.x), std::max(s.box.max.y, p.y)};
        }
    }
    return s;
}

void check_distance(const Support& s, std::span<const Vec2> points, double h) {
    const double min_dist = 2.0 * h;
    for (const Vec2 x : points) {
        const bool far_from_box = x.x < s.box.min.x - min_dist || x.x > s.box.max.x + min_dist ||
                                  x.y < s.box.min.y - min_dist || x.y > s.box.max.y + min_dist;
        if (far_from_box) continue;
        for (const Vec2 y : s.nodes) {
            if (distance(x, y) < min_dist) {
                std::ostringstream msg;
                msg << "field point (" << x.x << ", " << x.y
                    << ") lies within 2h of the contrast support";
                throw AccuracyError(msg.str());
            }
        }
    }
}

// eta_j * u_j on the support, scaled by k^2 h^2.
std::vector<cplx> weighted_sources(const TotalField& total, const ContrastGrid& grid,
                                   const Support& s) {
    if (total.geometry.n != grid.geometry.n || total.u.size() != grid.eta.size()) {
        throw std::invalid_argument("total field and contrast grid have different shapes");
    }
    const double scale = total.k * total.k * grid.geometry.h * grid.geometry.h;
    std::vector<cplx> q(s.index.size());
    for (std::size_t m = 0; m < s.index.size(); ++m) {
        q[m] = scale * grid.eta[s.index[m]] * total.u[s.index[m]];
    }
    return q;
}

// Lippmann-Schwinger operator A u = u - k^2 (K * (eta u)).
class LsOperator {
public:
    LsOperator(const ContrastGrid& grid, double k) : grid_(grid), k_(k), fft_(grid.geometry.n) {
        const int n = grid.geometry.n;
        const double h = grid.geometry.h;
        kernel_hat_.resize(fft_.size());
        cplx* buf = fft_.data();
        for (int j = 0; j < n; ++j) {
            const int my = j < n / 2 ? j : j - n;
            for (int i = 0; i < n; ++i) {
                const int mx = i < n / 2 ? i : i - n;
                const double r = h * std::hypot(double(mx), double(my));
                buf[static_cast<std::size_t>(j) * n + i] =
                    r == 0.0 ? lattice_self_weight(k, h)
                             : cplx(0.0, 0.25) * specfun::hankel1(0, k * r);
            }
        }
        fft_.forward();
        const double scale = k * k * h * h / static_cast<double>(fft_.size());
        for (std::size_t q = 0; q < fft_.size(); ++q) kernel_hat_[q] = buf[q] * scale;
    }

    void apply(const detail::cvec& in, detail::cvec& out) {
        cplx* buf = fft_.data();
        const auto& eta = grid_.eta;
        for (std::size_t q = 0; q < in.size(); ++q) buf[q] = eta[q] * in[q];
        fft_.forward();
        for (std::size_t q = 0; q < in.size(); ++q) buf[q] *= kernel_hat_[q];
        fft_.backward();
        for (std::size_t q = 0; q < in.size(); ++q) out[q] = in[q] - buf[q];
    }

private:
    const ContrastGrid& grid_;
    double k_;
    detail::Fft2d fft_;
    std::vector<cplx> kernel_hat_;
};

cplx bessel_derivative_j(int n, double x) {
    if (n == 0) return -std::cyl_bessel_j(1.0, x);
    return 0.5 * (std::cyl_bessel_j(n - 1.0, x) - std::cyl_bessel_j(n + 1.0, x));
}

cplx hankel_n(int n, double x) { return {std::cyl_bessel_j(double(n), x), std::cyl_neumann(double(n), x)}; }

cplx hankel_n_derivative(int n, double x) {
    if (n == 0) return -hankel_n(1, x);
    return 0.5 * (hankel_n(n - 1, x) - hankel_n(n + 1, x));
}

cplx ipow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// Coefficients c_n (n >= 0) of u_sc = sum_n c_n H_n(kr) e^{i n (phi - theta)},
// with c_{-n} = c_n.
std::vector<cplx> mie_coefficients(double k, double radius, double eta, int order) {
    if (radius <= 0.0 || k <= 0.0) throw std::invalid_argument("mie: k and radius must be positive");
    if (eta <= -1.0) throw std::invalid_argument("mie: 1 + eta must be positive");
    const double k1 = k * std::sqrt(1.0 + eta);
    const double ka = k * radius;
    const double k1a = k1 * radius;
    const bool automatic = order <= 0;
    const int limit = automatic ? 120 : order;
    std::vector<cplx> c;
    double largest = 0.0;
    for (int n = 0; n <= limit; ++n) {
        const double jn_in = std::cyl_bessel_j(double(n), k1a);
        const cplx djn_in = bessel_derivative_j(n, k1a);
        const double jn = std::cyl_bessel_j(double(n), ka);
        const cplx djn = bessel_derivative_j(n, ka);
        const cplx num = k1 * djn_in * jn - k * jn_in * djn;
        const cplx den = k * jn_in * hankel_n_derivative(n, ka) - k1 * djn_in * hankel_n(n, ka);
        const cplx cn = ipow(n) * num / den;
        c.push_back(cn);
        largest = std::max(largest, std::abs(cn));
        if (automatic && n > k1a + 5 && std::abs(cn) < 1e-16 * largest) break;
    }
    return c;
}

}  // namespace

GridGeometry GridGeometry::cell(int n, double half_width) {
    return {n, 2.0 * half_width / n, {-half_width, -half_width}};
}

GridGeometry GridGeometry::for_domain(const Box& domain, int n) {
    if (domain.empty()) throw GeometryError("scene domain is empty");
    const double half = 2.0 * 0.5 * std::max(domain.width(), domain.height());
    const Vec2 center = 0.5 * (domain.min + domain.max);
    return {n, 2.0 * half / n, {center.x - half, center.y - half}};
}

void ContrastGrid::validate() const {
    const int n = geometry.n;
    if (!is_power_of_two(n)) throw GeometryError("contrast grid size must be a power of two");
    if (eta.size() != geometry.size()) throw GeometryError("contrast grid has wrong size");
    if (!(geometry.h > 0.0)) throw GeometryError("contrast grid spacing must be positive");
    const int lo = n / 4;
    const int hi = 3 * n / 4;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (eta[static_cast<std::size_t>(j) * n + i] == cplx{}) continue;
            if (i < lo || i > hi || j < lo || j > hi) {
                throw GeometryError(
                    "contrast support leaves the central half of the periodization cell");
            }
        }
    }
}

bool ContrastGrid::empty_support() const {
    return std::all_of(eta.begin(), eta.end(), [](cplx z) { return z == cplx{}; });
}

ContrastGrid sample_contrast(const ContrastScene& scene, const GridGeometry& geometry,
                             int supersample) {
    if (supersample < 1) throw std::invalid_argument("sample_contrast: supersample must be >= 1");
    const double eps = 1e-12 * std::max(1.0, geometry.extent());
    const Box covered{geometry.origin,
                      {geometry.origin.x + geometry.extent(), geometry.origin.y + geometry.extent()}};
    if (scene.domain.min.x < covered.min.x - eps || scene.domain.min.y < covered.min.y - eps ||
        scene.domain.max.x > covered.max.x + eps || scene.domain.max.y > covered.max.y + eps) {
        throw GeometryError("solver grid does not cover the scene domain");
    }
    ContrastGrid grid{geometry, std::vector<cplx>(geometry.size())};
    if (scene.shapes.empty()) return grid;

    Box support = scene.support_box();
    const double h = geometry.h;
    if (supersample > 1) {
        support.min -= Vec2{0.5 * h, 0.5 * h};
        support.max += Vec2{0.5 * h, 0.5 * h};
    }
    const int s = supersample;
    for (int j = 0; j < geometry.n; ++j) {
        for (int i = 0; i < geometry.n; ++i) {
            const Vec2 p = geometry.node(i, j);
            if (!support.contains(p)) continue;
            cplx value;
            if (s == 1) {
                value = scene.contrast_at(p);
            } else {
                for (int b = 0; b < s; ++b) {
                    for (int a = 0; a < s; ++a) {
                        const Vec2 q{p.x + h * ((a + 0.5) / s - 0.5), p.y + h * ((b + 0.5) / s - 0.5)};
                        value += scene.contrast_at(q);
                    }
                }
                value /= double(s * s);
            }
            grid.eta[static_cast<std::size_t>(j) * geometry.n + i] = value;
        }
    }
    return grid;
}

std::string CurveDescriptor::describe() const {
    std::ostringstream s;
    if (kind == CurveKind::Circle) {
        s << "circle(R=" << radius << ", M=" << count << ")";
    } else {
        s << "arc(R=" << radius << ", " << start_deg << "..." << end_deg << " deg, M=" << count
          << ")";
    }
    return s.str();
}

MeasurementCurve MeasurementCurve::circle(double radius, int count) {
    if (!(radius > 0.0) || count < 1) throw GeometryError("circle needs R > 0 and count >= 1");
    MeasurementCurve c;
    c.descriptor = {CurveKind::Circle, radius, count, 0.0, 360.0};
    const double w = 2.0 * kPi * radius / count;
    for (int j = 0; j < count; ++j) {
        const Vec2 nu = unit_vector(2.0 * kPi * j / count);
        c.normals.push_back(nu);
        c.points.push_back(radius * nu);
        c.weights.push_back(w);
    }
    return c;
}

MeasurementCurve MeasurementCurve::arc(double radius, double start_deg, double end_deg, int count) {
    if (!(radius > 0.0) || count < 2 || !(end_deg > start_deg)) {
        throw GeometryError("arc needs R > 0, count >= 2 and end > start");
    }
    MeasurementCurve c;
    c.descriptor = {CurveKind::Arc, radius, count, start_deg, end_deg};
    const double step_deg = (end_deg - start_deg) / (count - 1);
    const double w = radius * step_deg * kPi / 180.0;
    for (int j = 0; j < count; ++j) {
        const Vec2 nu = unit_vector((start_deg + j * step_deg) * kPi / 180.0);
        c.normals.push_back(nu);
        c.points.push_back(radius * nu);
        c.weights.push_back(w);
    }
    return c;
}

MeasurementCurve MeasurementCurve::from_descriptor(const CurveDescriptor& d) {
    return d.kind == CurveKind::Circle ? circle(d.radius, d.count)
                                       : arc(d.radius, d.start_deg, d.end_deg, d.count);
}

void CauchyData::validate() const {
    if (us.size() != curve.size() || dus.size() != curve.size() ||
        curve.normals.size() != curve.size() || curve.weights.size() != curve.size()) {
        throw GeometryError("Cauchy data length does not match the measurement curve");
    }
    if (!(k > 0.0)) throw GeometryError("wave number must be positive");
}

FarFieldPattern FarFieldPattern::uniform_directions(int count, double k) {
    if (count < 1) throw GeometryError("need at least one far-field direction");
    FarFieldPattern ff;
    ff.k = k;
    for (int j = 0; j < count; ++j) {
        ff.directions.push_back(unit_vector(2.0 * kPi * j / count));
        ff.weights.push_back(2.0 * kPi / count);
    }
    ff.values.assign(static_cast<std::size_t>(count), cplx{});
    return ff;
}

cplx incident_plane_wave(double k, double theta, Vec2 x) {
    const double phase = k * (x.x * std::cos(theta) + x.y * std::sin(theta));
    return {std::cos(phase), std::sin(phase)};
}

std::vector<cplx> incident_plane_wave(double k, double theta, std::span<const Vec2> points) {
    std::vector<cplx> out;
    out.reserve(points.size());
    for (const Vec2 p : points) out.push_back(incident_plane_wave(k, theta, p));
    return out;
}

cplx green2d(double k, Vec2 x, Vec2 y) {
    const double r = distance(x, y);
    if (r == 0.0) throw DomainError("green2d: x == y (singular)");
    return cplx(0.0, 0.25) * specfun::hankel1(0, k * r);
}

cplx green2d_normal_derivative(double k, Vec2 x, Vec2 y, Vec2 nu) {
    const Vec2 d = x - y;
    const double r = norm(d);
    if (r == 0.0) throw DomainError("green2d_normal_derivative: x == y (singular)");
    return cplx(0.0, -0.25 * k) * specfun::hankel1(1, k * r) * (dot(d, nu) / r);
}

TotalField ls_solve(const ContrastGrid& grid, double k, double theta, const SolverOptions& options) {
    grid.validate();
    if (!(k > 0.0)) throw std::invalid_argument("ls_solve: wave number must be positive");
    const auto& g = grid.geometry;

    TotalField total;
    total.geometry = g;
    total.k = k;
    total.theta = theta;
    total.u.resize(g.size());
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            total.u[static_cast<std::size_t>(j) * g.n + i] = incident_plane_wave(k, theta, g.node(i, j));
        }
    }
    if (grid.empty_support()) {
        total.residual_history = {0.0};
        return total;
    }

    LsOperator op(grid, k);
    const std::vector<cplx> rhs = total.u;
    auto result = detail::gmres([&](const detail::cvec& in, detail::cvec& out) { op.apply(in, out); },
                                rhs, total.u, options.tolerance, options.restart,
                                options.max_iterations);
    total.iterations = result.iterations;
    total.residual_history = std::move(result.residual_history);
    if (!result.converged) {
        std::ostringstream msg;
        msg << "Lippmann-Schwinger GMRES did not reach tolerance " << options.tolerance << " in "
            << result.iterations << " iterations (residual " << total.residual_history.back()
            << ")";
        throw SolverError(msg.str(), total.residual_history);
    }
    return total;
}

std::vector<cplx> scattered_at(const TotalField& total, const ContrastGrid& grid,
                               std::span<const Vec2> points) {
    std::vector<cplx> out(points.size());
    const Support s = support_of(grid);
    if (s.nodes.empty()) return out;
    check_distance(s, points, grid.geometry.h);
    const auto q = weighted_sources(total, grid, s);
    detail::parallel_for(points.size(), [&](std::size_t p) {
        cplx sum{};
        for (std::size_t m = 0; m < q.size(); ++m) sum += green2d(total.k, points[p], s.nodes[m]) * q[m];
        out[p] = sum;
    });
    return out;
}

std::vector<cplx> scattered_normal_derivative(const TotalField& total, const ContrastGrid& grid,
                                              const MeasurementCurve& curve) {
    std::vector<cplx> out(curve.size());
    const Support s = support_of(grid);
    if (s.nodes.empty()) return out;
    check_distance(s, curve.points, grid.geometry.h);
    const auto q = weighted_sources(total, grid, s);
    detail::parallel_for(curve.size(), [&](std::size_t p) {
        cplx sum{};
        for (std::size_t m = 0; m < q.size(); ++m) {
            sum += green2d_normal_derivative(total.k, curve.points[p], s.nodes[m], curve.normals[p]) * q[m];
        }
        out[p] = sum;
    });
    return out;
}

cplx far_field_constant(double k) {
    return std::polar(1.0 / std::sqrt(8.0 * kPi * k), kPi / 4.0);
}

FarFieldPattern far_field(const TotalField& total, const ContrastGrid& grid,
                          FarFieldPattern directions) {
    FarFieldPattern ff = std::move(directions);
    ff.k = total.k;
    ff.values.assign(ff.directions.size(), cplx{});
    if (ff.weights.size() != ff.directions.size()) {
        ff.weights.assign(ff.directions.size(), 2.0 * kPi / std::max<std::size_t>(1, ff.directions.size()));
    }
    const Support s = support_of(grid);
    if (s.nodes.empty()) return ff;
    const auto q = weighted_sources(total, grid, s);
    const cplx alpha = far_field_constant(total.k);
    detail::parallel_for(ff.directions.size(), [&](std::size_t d) {
        cplx sum{};
        for (std::size_t m = 0; m < q.size(); ++m) {
            const double phase = -total.k * dot(s.nodes[m], ff.directions[d]);
            sum += cplx(std::cos(phase), std::sin(phase)) * q[m];
        }
        ff.values[d] = alpha * sum;
    });
    return ff;
}

CauchyData cauchy_data(const TotalField& total, const ContrastGrid& grid,
                       const MeasurementCurve& curve) {
    CauchyData data;
    data.curve = curve;
    data.k = total.k;
    data.theta = total.theta;
    data.us = scattered_at(total, grid, curve.points);
    data.dus = scattered_normal_derivative(total, grid, curve);
    return data;
}

std::vector<cplx> mie_disk_reference(double k, double radius, double eta, double theta,
                                     std::span<const Vec2> points, int order) {
    std::vector<cplx> out(points.size());
    if (eta == 0.0) return out;
    const auto c = mie_coefficients(k, radius, eta, order);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double r = norm(points[p]);
        if (r <= radius) throw GeometryError("mie_disk_reference: point inside the disk");
        const double phi = std::atan2(points[p].y, points[p].x) - theta;
        cplx sum = c[0] * hankel_n(0, k * r);
        for (std::size_t n = 1; n < c.size(); ++n) {
            sum += 2.0 * c[n] * hankel_n(static_cast<int>(n), k * r) * std::cos(double(n) * phi);
        }
        out[p] = sum;
    }
    return out;
}

std::vector<cplx> mie_disk_far_field(double k, double radius, double eta, double theta,
                                     std::span<const Vec2> directions, int order) {
    std::vector<cplx> out(directions.size());
    if (eta == 0.0) return out;
    const auto c = mie_coefficients(k, radius, eta, order);
    const cplx prefactor = std::polar(std::sqrt(2.0 / (kPi * k)), -kPi / 4.0);
    for (std::size_t d = 0; d < directions.size(); ++d) {
        const double phi = std::atan2(directions[d].y, directions[d].x) - theta;
        cplx sum = c[0];
        for (std::size_t n = 1; n < c.size(); ++n) {
            sum += 2.0 * c[n] * ipow(-static_cast<int>(n)) * std::cos(double(n) * phi);
        }
        out[d] = prefactor * sum;
    }
    return out;
}

Simulation simulate(const ContrastScene& scene, double k, double theta,
                    const SimulationOptions& options) {
    Simulation sim;
    sim.grid = sample_contrast(scene, GridGeometry::for_domain(scene.domain, options.n),
                               options.supersample);
    sim.total = ls_solve(sim.grid, k, theta, options.solver);
    return sim;
}

}  // namespace osm
