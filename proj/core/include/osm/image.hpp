#pragma once

#include "osm/geometry.hpp"

#include <cstddef>
#include <filesystem>
#include <vector>

namespace osm {

/// Row-major real image, top row first. `extent` is the physical square the
/// pixels tile; pixel (col, row) has center
/// (extent.min.x + (col + 0.5) dx, extent.max.y - (row + 0.5) dy).
struct PixelImage {
    int width = 0;
    int height = 0;
    Box extent;
    std::vector<float> values;

    PixelImage() = default;
    PixelImage(int w, int h, Box ext, float fill = 0.0f)
        : width(w), height(h), extent(ext), values(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int col, int row) { return values[static_cast<std::size_t>(row) * width + col]; }
    float at(int col, int row) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    Vec2 pixel_center(int col, int row) const {
        const double dx = extent.width() / width;
        const double dy = extent.height() / height;
        return {extent.min.x + (col + 0.5) * dx, extent.max.y - (row + 0.5) * dy};
    }
    std::size_t popcount() const;

    friend bool operator==(const PixelImage&, const PixelImage&) = default;
};

// OSMI raw format: "OSMI", u32 version (=1), u32 width, u32 height, then
// width*height float32 values, all little-endian, row-major, top row first.
// The extent is not part of the file.
void write_osmi(const std::filesystem::path& path, const PixelImage& image);
PixelImage read_osmi(const std::filesystem::path& path, Box extent = Box::square(2.0));
std::vector<unsigned char> encode_osmi(const PixelImage& image);
PixelImage decode_osmi(const std::vector<unsigned char>& bytes, Box extent = Box::square(2.0));

/// 8-bit grayscale PNG preview; values are clamped to [0, 1].
void write_png_preview(const std::filesystem::path& path, const PixelImage& image);

/// Bilinear resampling onto a `width` x `height` raster over the same extent.
PixelImage resample_bilinear(const PixelImage& image, int width, int height);

}  // namespace osm
