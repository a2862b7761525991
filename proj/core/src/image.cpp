#include "osm/image.hpp"

#include "osm/errors.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>

namespace osm {
namespace {

constexpr std::uint32_t kOsmiVersion = 1;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const std::vector<unsigned char>& in, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
    return v;
}

}  // namespace

std::size_t PixelImage::popcount() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](float v) { return v != 0.0f; }));
}

std::vector<unsigned char> encode_osmi(const PixelImage& image) {
    std::vector<unsigned char> out;
    out.reserve(16 + 4 * image.values.size());
    for (char c : {'O', 'S', 'M', 'I'}) out.push_back(static_cast<unsigned char>(c));
    put_u32(out, kOsmiVersion);
    put_u32(out, static_cast<std::uint32_t>(image.width));
    put_u32(out, static_cast<std::uint32_t>(image.height));
    for (float v : image.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

PixelImage decode_osmi(const std::vector<unsigned char>& bytes, Box extent) {
    if (bytes.size() < 16 || !std::equal(bytes.begin(), bytes.begin() + 4, "OSMI")) {
        throw ParseError("OSMI: bad magic");
    }
    if (get_u32(bytes, 4) != kOsmiVersion) throw ParseError("OSMI: unsupported version");
    const std::uint32_t w = get_u32(bytes, 8);
    const std::uint32_t h = get_u32(bytes, 12);
    const std::size_t count = static_cast<std::size_t>(w) * h;
    if (bytes.size() != 16 + 4 * count) throw ParseError("OSMI: payload size mismatch");
    PixelImage img(static_cast<int>(w), static_cast<int>(h), extent);
    for (std::size_t i = 0; i < count; ++i) {
        img.values[i] = std::bit_cast<float>(get_u32(bytes, 16 + 4 * i));
    }
    return img;
}

void write_osmi(const std::filesystem::path& path, const PixelImage& image) {
    const auto bytes = encode_osmi(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

PixelImage read_osmi(const std::filesystem::path& path, Box extent) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return decode_osmi(bytes, extent);
}

void write_png_preview(const std::filesystem::path& path, const PixelImage& image) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng initialisation failed");
    }
    std::vector<png_byte> row(static_cast<std::size_t>(image.width));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            const float v = std::clamp(image.at(c, r), 0.0f, 1.0f);
            row[static_cast<std::size_t>(c)] = static_cast<png_byte>(std::lround(v * 255.0f));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

PixelImage resample_bilinear(const PixelImage& image, int width, int height) {
    if (width < 1 || height < 1 || image.width < 1 || image.height < 1) {
        throw std::invalid_argument("resample_bilinear: empty raster");
    }
    PixelImage out(width, height, image.extent);
    const double sx = static_cast<double>(image.width) / width;
    const double sy = static_cast<double>(image.height) / height;
    for (int r = 0; r < height; ++r) {
        // pixel centers aligned: source coordinate of target center
        const double fy = std::clamp((r + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
        const int y0 = std::min(static_cast<int>(fy), image.height - 1);
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double ty = fy - y0;
        for (int c = 0; c < width; ++c) {
            const double fx = std::clamp((c + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
            const int x0 = std::min(static_cast<int>(fx), image.width - 1);
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double tx = fx - x0;
            const double top = (1 - tx) * image.at(x0, y0) + tx * image.at(x1, y0);
            const double bottom = (1 - tx) * image.at(x0, y1) + tx * image.at(x1, y1);
            out.at(c, r) = static_cast<float>((1 - ty) * top + ty * bottom);
        }
    }
    return out;
}

}  // namespace osm
