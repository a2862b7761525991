#pragma once

#include "osm/forward.hpp"
#include "osm/geometry.hpp"
#include "osm/image.hpp"

#include <span>
#include <string>
#include <vector>

namespace osm {

/// n x n uniform nodes over `extent`, endpoints included. Node (col, row)
/// is stored at row * n + col with row 0 at the top (largest y), matching
/// the raster convention of PixelImage.
struct SamplingGrid {
    Box extent = Box::square(2.0);
    int n = 64;

    double spacing() const { return extent.width() / (n - 1); }
    Vec2 point(int col, int row) const;
    std::vector<Vec2> points() const;
};

struct IndicatorParams {
    int rho = 2;        // exponent, 1 or 2
    int dimension = 2;  // kernel selection, 2 or 3
    bool normalize = false;

    void validate() const;
};

struct Provenance {
    std::string indicator;  // "nearfield", "farfield", "osm"
    int rho = 2;
    double k = 0.0;
    std::string data;  // curve or direction-set description
};

struct ImagingResult {
    SamplingGrid grid;
    std::vector<double> values;  // n*n, nonnegative
    bool normalized = false;
    bool degenerate = false;  // all-zero image
    Provenance provenance;

    double max_value() const;
};

/// Kernel of the indicator in the J0 convention: J0(kr) for dimension 2,
/// (k / 4 pi) j0(kr) for dimension 3.
double im_phi(int dimension, double k, double r);
/// d/dr of im_phi.
double im_phi_radial_derivative(int dimension, double k, double r);
/// grad_x im_phi(|x - z|) . nu in the plane. Throws DomainError when x == z.
double im_phi_normal_derivative(int dimension, double k, Vec2 x, Vec2 z, Vec2 nu);

/// Cauchy-data indicator
///   I(z) = | sum_j w_j (d_nu ImPhi(x_j, z) us_j - ImPhi(x_j, z) dus_j) |^rho.
ImagingResult indicator_nearfield(const CauchyData& data, const SamplingGrid& grid,
                                  const IndicatorParams& params = {});
/// Same functional evaluated at arbitrary points (no normalization).
std::vector<double> indicator_nearfield_at(const CauchyData& data, std::span<const Vec2> points,
                                           const IndicatorParams& params = {});

/// Derivative-free variant: dus is replaced by i k us.
ImagingResult indicator_farfield(const MeasurementCurve& curve, std::span<const cplx> us, double k,
                                 const SamplingGrid& grid, const IndicatorParams& params = {});

/// |sum_j w_j exp(i k z . xhat_j) u_inf(xhat_j)|, without exponent.
ImagingResult indicator_osm(const FarFieldPattern& ff, const SamplingGrid& grid,
                            const IndicatorParams& params = {});
/// Whether the far-field directions sample the full circle uniformly.
bool covers_full_circle(const FarFieldPattern& ff);

/// |gamma| of the near-field / OSM relation as printed: (sqrt(pi) / sqrt(2k))^rho
/// in 2D and (4 pi / k)^rho in 3D.
double gamma_constant(int dimension, double k, int rho);

/// Divides by the maximum. All-zero input passes through with `degenerate` set.
ImagingResult normalize(ImagingResult result);
/// Bilinear interpolation of the node values onto a width x width raster of
/// pixel centers over the same extent.
PixelImage upsample_bilinear(const ImagingResult& result, int width);
/// The image handed to the learning stage: bilinear upsampling to
/// width x width followed by renormalization so the maximum pixel is exactly
/// 1 (upsampled pixel centers rarely land on the maximal node). Degenerate
/// input yields an all-zero raster.
PixelImage preliminary_image(const ImagingResult& result, int width);
/// Node values as a raster (row 0 at the top); pixel centers are the nodes.
PixelImage to_pixel_image(const ImagingResult& result);

/// OSMI payload plus a JSON sidecar (indicator, rho, k, data descriptor).
void write_imaging_result(const std::filesystem::path& osmi_path, const ImagingResult& result);

}  // namespace osm
