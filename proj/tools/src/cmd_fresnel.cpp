#include "common.hpp"

#include "osm/fresnel.hpp"

namespace osm::cli {

void add_fresnel(CLI::App& app, FresnelArgs& a) {
    app.add_option("--input", a.input, "Fresnel .exp text file")->required()->check(CLI::ExistingFile);
    app.add_option("--columns", a.columns, "Comma-separated column map (tx, rx, freq, total_re, ..., skip)")
        ->capture_default_str();
    app.add_flag("--lenient", a.lenient, "Skip malformed lines instead of failing");
    app.add_option("--freq-ghz", a.freq_ghz, "Frequency slice (GHz)")->capture_default_str();
    app.add_option("--tx-deg", a.tx_deg, "Transmitter angle (degrees)")->capture_default_str();
    app.add_option("--rho", a.rho, "Exponent of the indicator (1 or 2)")
        ->capture_default_str()
        ->check(CLI::IsMember({1, 2}));
    app.add_option("--grid-n", a.grid_n, "Sampling points per side (count)")
        ->capture_default_str()
        ->check(CLI::Range(2, 4096));
    app.add_option("--extent", a.extent, "Half-width of the sampling domain (rescaled length, 1 = 40 mm)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--image-size", a.image_size, "Side of the output image (pixels)")
        ->capture_default_str()
        ->check(CLI::Range(2, 8192));
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
}

int run_fresnel(const FresnelArgs& a) {
    const std::filesystem::path out = a.out;
    write_resolved(out, {{"command", "fresnel"},
                         {"input", a.input},
                         {"columns", a.columns},
                         {"lenient", a.lenient},
                         {"freq-ghz", a.freq_ghz},
                         {"tx-deg", a.tx_deg},
                         {"rho", a.rho},
                         {"grid-n", a.grid_n},
                         {"extent", a.extent},
                         {"image-size", a.image_size},
                         {"out", a.out}});

    FresnelParseOptions options;
    options.columns = ColumnMap::parse(a.columns);
    options.lenient = a.lenient;
    const FresnelSet set = read_fresnel(a.input, options);
    for (const auto& d : set.diagnostics) {
        warn("line " + std::to_string(d.line) + " skipped: " + d.message);
    }
    const FresnelImage img = image_fresnel(set, a.freq_ghz, a.tx_deg, {Box::square(a.extent), a.grid_n},
                                           {a.rho, 2, true}, a.image_size);
    if (img.result.degenerate) warn("scattered data are identically zero; the image is degenerate");
    write_imaging_result(out / "fresnel.osmi", img.result);
    write_osmi(out / "fresnel_upsampled.osmi", img.image);
    write_png_preview(out / "fresnel.png", img.image);
    info("k = " + std::to_string(fresnel_wave_number(a.freq_ghz)) + ", " +
         std::to_string(img.result.grid.n) + "^2 sampling grid");
    return kOk;
}

}  // namespace osm::cli
