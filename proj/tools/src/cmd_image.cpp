#include "common.hpp"

#include "osm/forward.hpp"
#include "osm/imaging.hpp"

namespace osm::cli {

void add_image(CLI::App& app, ImageArgs& a) {
    app.add_option("--data", a.data, "Cauchy data header (cauchy.json)")->required();
    app.add_option("--indicator", a.indicator, "nearfield (Cauchy data) or farfield (derivative-free)")
        ->capture_default_str()
        ->check(CLI::IsMember({"nearfield", "farfield"}));
    app.add_option("--rho", a.rho, "Exponent of the indicator (1 or 2)")
        ->capture_default_str()
        ->check(CLI::IsMember({1, 2}));
    app.add_option("--grid-n", a.grid_n, "Sampling points per side (count)")
        ->capture_default_str()
        ->check(CLI::Range(2, 4096));
    app.add_option("--extent", a.extent, "Half-width of the square sampling domain (length)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_flag("--normalize,!--no-normalize", a.normalize, "Divide by the maximum (default on)");
    app.add_option("--image-size", a.image_size, "Side of the upsampled preview image (pixels)")
        ->capture_default_str()
        ->check(CLI::Range(2, 8192));
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
}

int run_image(const ImageArgs& a) {
    const std::filesystem::path out = a.out;
    write_resolved(out, {{"command", "image"},
                         {"data", a.data},
                         {"indicator", a.indicator},
                         {"rho", a.rho},
                         {"grid-n", a.grid_n},
                         {"extent", a.extent},
                         {"normalize", a.normalize},
                         {"image-size", a.image_size},
                         {"out", a.out}});

    const CauchyData data = read_cauchy_data(a.data);
    const SamplingGrid grid{Box::square(a.extent), a.grid_n};
    const IndicatorParams params{a.rho, 2, a.normalize};
    const ImagingResult result = a.indicator == "nearfield"
                                     ? indicator_nearfield(data, grid, params)
                                     : indicator_farfield(data.curve, data.us, data.k, grid, params);
    if (result.degenerate) warn("data are identically zero; the image is degenerate");

    write_imaging_result(out / "image.osmi", result);
    const PixelImage preview = a.normalize ? preliminary_image(result, a.image_size)
                                           : upsample_bilinear(result, a.image_size);
    write_osmi(out / "image_upsampled.osmi", preview);
    write_png_preview(out / "image.png", preview);
    info("wrote " + (out / "image.osmi").string());
    return kOk;
}

}  // namespace osm::cli
