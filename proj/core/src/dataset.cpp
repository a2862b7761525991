#include "osm/dataset.hpp"

#include "osm/errors.hpp"
#include "osm/imaging.hpp"

#include "parallel.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace osm {
namespace {

using nlohmann::json;

void perturb(std::vector<cplx>& v, double delta, Rng& rng) {
    std::vector<cplx> zeta(v.size());
    double zeta_norm = 0.0;
    for (auto& z : zeta) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        z = {re, im};
        zeta_norm += std::norm(z);
    }
    double v_norm = 0.0;
    for (const auto& x : v) v_norm += std::norm(x);
    if (v_norm == 0.0 || zeta_norm == 0.0 || delta == 0.0) return;
    const double scale = delta * std::sqrt(v_norm) / std::sqrt(zeta_norm);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += scale * zeta[i];
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json meta_json(const SampleMeta& m) {
    return {{"version", 1},
            {"id", m.id},
            {"family", m.family},
            {"theta_deg", m.theta_deg},
            {"k", m.k},
            {"seed", m.seed},
            {"noise", m.noise},
            {"iterations", m.iterations},
            {"degenerate", m.degenerate},
            {"scene", json::parse(m.scene_json)}};
}

json spec_json(const DatasetSpec& s) {
    json thetas = json::array();
    for (const auto& t : s.thetas) thetas.push_back({{"theta_deg", t.theta_deg}, {"count", t.count}});
    json j = {{"count", s.count},
              {"one_ellipse_fraction", s.one_ellipse_fraction},
              {"thetas", thetas},
              {"k", s.k},
              {"contrast", {{"min", s.contrast.min}, {"max", s.contrast.max}}},
              {"noise", s.noise},
              {"curve", json::parse(curve_descriptor_to_json(s.curve))},
              {"solver_n", s.solver_n},
              {"supersample", s.supersample},
              {"solver_tolerance", s.solver_tolerance},
              {"max_iterations", s.max_iterations},
              {"image_size", s.image_size},
              {"sampling_n", s.sampling_n},
              {"rho", s.rho},
              {"seed", s.seed},
              {"output_dir", s.output_dir.generic_string()},
              {"previews", s.previews}};
    if (!s.ids.empty()) j["ids"] = s.ids;
    return j;
}

DatasetSpec spec_from(const json& j) {
    DatasetSpec s;
    s.count = j.value("count", s.count);
    s.one_ellipse_fraction = j.value("one_ellipse_fraction", s.one_ellipse_fraction);
    if (j.contains("thetas")) {
        for (const auto& t : j.at("thetas")) {
            s.thetas.push_back({t.at("theta_deg").get<double>(), t.at("count").get<int>()});
        }
    }
    s.k = j.value("k", s.k);
    if (j.contains("contrast")) {
        s.contrast.min = j.at("contrast").value("min", s.contrast.min);
        s.contrast.max = j.at("contrast").value("max", s.contrast.max);
    }
    s.noise = j.value("noise", s.noise);
    if (j.contains("curve")) s.curve = curve_descriptor_from_json(j.at("curve").dump());
    s.solver_n = j.value("solver_n", s.solver_n);
    s.supersample = j.value("supersample", s.supersample);
    s.solver_tolerance = j.value("solver_tolerance", s.solver_tolerance);
    s.max_iterations = j.value("max_iterations", s.max_iterations);
    s.image_size = j.value("image_size", s.image_size);
    s.sampling_n = j.value("sampling_n", s.sampling_n);
    s.rho = j.value("rho", s.rho);
    s.seed = j.value("seed", s.seed);
    s.output_dir = j.value("output_dir", s.output_dir.generic_string());
    s.previews = j.value("previews", s.previews);
    if (j.contains("ids")) s.ids = j.at("ids").get<std::vector<int>>();
    return s;
}

ManifestFile hashed(const std::filesystem::path& root, const std::string& rel) {
    return {rel, sha256_file(root / rel)};
}

}  // namespace

CauchyData add_noise(const CauchyData& data, double delta, Rng& rng) {
    if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be nonnegative");
    CauchyData noisy = data;
    perturb(noisy.us, delta, rng);
    perturb(noisy.dus, delta, rng);
    return noisy;
}

void DatasetSpec::validate() const {
    if (count < 1) throw std::invalid_argument("dataset count must be at least 1");
    if (!(one_ellipse_fraction >= 0.0 && one_ellipse_fraction <= 1.0)) {
        throw std::invalid_argument("one-ellipse fraction must lie in [0, 1]");
    }
    if (!thetas.empty()) {
        long total = 0;
        for (const auto& t : thetas) {
            if (t.count < 0) throw std::invalid_argument("theta counts must be nonnegative");
            total += t.count;
        }
        if (total != count) throw std::invalid_argument("theta counts must sum to the sample count");
    }
    if (!(k > 0.0)) throw std::invalid_argument("wave number must be positive");
    if (!(noise >= 0.0)) throw std::invalid_argument("noise level must be nonnegative");
    if (contrast.min > contrast.max || contrast.min < 0.0) {
        throw std::invalid_argument("contrast range must satisfy 0 <= min <= max");
    }
    if (image_size < 2 || sampling_n < 2) throw std::invalid_argument("image sizes must be at least 2");
    if (rho != 1 && rho != 2) throw std::invalid_argument("rho must be 1 or 2");
    if (!(solver_tolerance > 0.0) || max_iterations < 1) {
        throw std::invalid_argument("solver tolerance and iteration cap must be positive");
    }
    if (supersample < 1) throw std::invalid_argument("supersample must be positive");
    for (int id : ids) {
        if (id < 0 || id >= count) throw std::invalid_argument("sample id outside [0, count)");
    }
}

double DatasetSpec::theta_of(int id) const {
    int upper = 0;
    for (const auto& t : thetas) {
        upper += t.count;
        if (id < upper) return t.theta_deg;
    }
    return 90.0;
}

std::vector<int> DatasetSpec::sample_ids() const {
    if (!ids.empty()) return ids;
    std::vector<int> all(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
}

std::string dataset_spec_to_json(const DatasetSpec& spec) { return spec_json(spec).dump(2); }

DatasetSpec dataset_spec_from_json(std::string_view text) {
    try {
        return spec_from(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("dataset spec: ") + e.what());
    }
}

AugmentKind parse_augment(std::string_view name) {
    if (name == "hflip") return AugmentKind::HFlip;
    if (name == "vflip") return AugmentKind::VFlip;
    if (name == "rot90") return AugmentKind::Rot90;
    if (name == "rot270") return AugmentKind::Rot270;
    if (name == "zoom") return AugmentKind::Zoom;
    throw std::invalid_argument("unknown augmentation '" + std::string(name) + "'");
}

std::string_view augment_name(AugmentKind kind) {
    switch (kind) {
        case AugmentKind::HFlip: return "hflip";
        case AugmentKind::VFlip: return "vflip";
        case AugmentKind::Rot90: return "rot90";
        case AugmentKind::Rot270: return "rot270";
        case AugmentKind::Zoom: return "zoom";
    }
    return "?";
}

PixelImage hflip(const PixelImage& image) {
    PixelImage out = image;
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) out.at(c, r) = image.at(image.width - 1 - c, r);
    }
    return out;
}

PixelImage vflip(const PixelImage& image) {
    PixelImage out = image;
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) out.at(c, r) = image.at(c, image.height - 1 - r);
    }
    return out;
}

PixelImage rot90(const PixelImage& image) {
    PixelImage out(image.height, image.width, image.extent);
    // out(c, r) = in(W-1-r, c)
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) out.at(c, r) = image.at(image.width - 1 - r, c);
    }
    return out;
}

PixelImage rot270(const PixelImage& image) {
    PixelImage out(image.height, image.width, image.extent);
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) out.at(c, r) = image.at(r, image.height - 1 - c);
    }
    return out;
}

int zoom_size(int size) { return static_cast<int>(std::lround(size * 1.05)); }

PixelImage zoom_crop(const PixelImage& image, int offset_col, int offset_row) {
    const int zw = zoom_size(image.width);
    const int zh = zoom_size(image.height);
    if (offset_col < 0 || offset_row < 0 || offset_col + image.width > zw ||
        offset_row + image.height > zh) {
        throw std::invalid_argument("zoom_crop: crop window outside the zoomed image");
    }
    const PixelImage big = resample_bilinear(image, zw, zh);
    PixelImage out(image.width, image.height, image.extent);
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) out.at(c, r) = big.at(c + offset_col, r + offset_row);
    }
    return out;
}

SamplePair augment(const SamplePair& pair, AugmentKind kind, Rng& rng) {
    if (pair.truth.width != pair.truth.height || pair.prelim.width != pair.prelim.height) {
        throw std::invalid_argument("augment: images must be square");
    }
    SamplePair out = pair;
    switch (kind) {
        case AugmentKind::HFlip:
            out.truth = hflip(pair.truth);
            out.prelim = hflip(pair.prelim);
            break;
        case AugmentKind::VFlip:
            out.truth = vflip(pair.truth);
            out.prelim = vflip(pair.prelim);
            break;
        case AugmentKind::Rot90:
            out.truth = rot90(pair.truth);
            out.prelim = rot90(pair.prelim);
            break;
        case AugmentKind::Rot270:
            out.truth = rot270(pair.truth);
            out.prelim = rot270(pair.prelim);
            break;
        case AugmentKind::Zoom: {
            const int slack = zoom_size(pair.truth.width) - pair.truth.width;
            const int oc = static_cast<int>(rng() % static_cast<std::uint64_t>(slack + 1));
            const int orow = static_cast<int>(rng() % static_cast<std::uint64_t>(slack + 1));
            out.truth = zoom_crop(pair.truth, oc, orow);
            for (float& v : out.truth.values) v = v >= 0.5f ? 1.0f : 0.0f;
            out.prelim = zoom_crop(pair.prelim, oc, orow);
            break;
        }
    }
    return out;
}

std::string sample_id(int id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", id);
    return buf;
}

SamplePair make_sample(const DatasetSpec& spec, int id) {
    SamplePair pair;
    SampleMeta& meta = pair.meta;
    meta.id = sample_id(id);
    meta.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(id));
    meta.theta_deg = spec.theta_of(id);
    meta.k = spec.k;
    meta.noise = spec.noise;

    Rng scene_rng(meta.seed);
    const auto family = uniform01(scene_rng) < spec.one_ellipse_fraction ? SceneFamily::OneEllipse
                                                                         : SceneFamily::TwoEllipse;
    meta.family = std::string(family_name(family));
    const ContrastScene scene = random_scene(scene_rng, family, spec.contrast);
    meta.scene_json = scene_to_json(scene);

    const double theta = meta.theta_deg * std::numbers::pi / 180.0;
    const Simulation sim = simulate(
        scene, spec.k, theta, {spec.solver_n, spec.supersample, {spec.solver_tolerance, 50, spec.max_iterations}});
    meta.iterations = sim.total.iterations;

    CauchyData data = cauchy_data(sim.total, sim.grid, MeasurementCurve::from_descriptor(spec.curve));
    if (spec.noise > 0.0) {
        Rng noise_rng(mix_seed(meta.seed, 1));
        data = add_noise(data, spec.noise, noise_rng);
    }
    const SamplingGrid grid{scene.domain, spec.sampling_n};
    const ImagingResult result = indicator_nearfield(data, grid, {spec.rho, 2, true});
    meta.degenerate = result.degenerate;
    pair.prelim = preliminary_image(result, spec.image_size);
    pair.truth = rasterize(scene, spec.image_size);
    return pair;
}

std::size_t Manifest::failed() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.status != "ok";
    return n;
}

std::string manifest_to_json(const Manifest& m) {
    json records = json::array();
    for (const auto& r : m.records) {
        json files = json::array();
        for (const auto& f : r.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
        json rec = {{"id", r.id}, {"status", r.status}, {"files", files}};
        if (!r.error.empty()) rec["error"] = r.error;
        records.push_back(rec);
    }
    // The output location is left out so trees written to different roots
    // stay byte-identical.
    json spec = spec_json(m.spec);
    spec.erase("output_dir");
    const json j = {{"version", m.version},
                    {"spec", spec},
                    {"samples", records},
                    {"failed", m.failed()}};
    return j.dump(2);
}

Manifest manifest_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        Manifest m;
        m.version = j.at("version").get<int>();
        if (m.version != 1) throw ParseError("unsupported manifest version");
        m.spec = spec_from(j.at("spec"));
        for (const auto& r : j.at("samples")) {
            ManifestRecord rec;
            rec.id = r.at("id").get<std::string>();
            rec.status = r.at("status").get<std::string>();
            rec.error = r.value("error", std::string{});
            for (const auto& f : r.at("files")) {
                rec.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
            }
            m.records.push_back(std::move(rec));
        }
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
}

Manifest generate(const DatasetSpec& spec) {
    spec.validate();
    const auto root = spec.output_dir;
    std::filesystem::create_directories(root / "pairs");
    std::filesystem::remove(root / "manifest.json");

    const auto ids = spec.sample_ids();
    Manifest manifest;
    manifest.spec = spec;
    manifest.records.resize(ids.size());

    detail::parallel_for(ids.size(), [&](std::size_t i) {
        ManifestRecord& rec = manifest.records[i];
        rec.id = sample_id(ids[i]);
        try {
            const SamplePair pair = make_sample(spec, ids[i]);
            const std::string stem = "pairs/" + rec.id;
            write_osmi(root / (stem + "_true.osmi"), pair.truth);
            write_osmi(root / (stem + "_prelim.osmi"), pair.prelim);
            write_text(root / (stem + "_meta.json"), meta_json(pair.meta).dump(2) + "\n");
            rec.files = {hashed(root, stem + "_true.osmi"), hashed(root, stem + "_prelim.osmi"),
                         hashed(root, stem + "_meta.json")};
            if (spec.previews) {
                write_png_preview(root / (stem + "_true.png"), pair.truth);
                write_png_preview(root / (stem + "_prelim.png"), pair.prelim);
                rec.files.push_back(hashed(root, stem + "_true.png"));
                rec.files.push_back(hashed(root, stem + "_prelim.png"));
            }
        } catch (const SolverError& e) {
            rec.status = "failed";
            rec.error = e.what();
            rec.files.clear();
        }
    });

    // Written last and renamed into place: its presence marks a complete tree.
    const auto tmp = root / "manifest.json.tmp";
    write_text(tmp, manifest_to_json(manifest) + "\n");
    std::filesystem::rename(tmp, root / "manifest.json");
    return manifest;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& root) {
    std::vector<std::string> problems;
    const auto bytes = read_bytes(root / "manifest.json");
    const Manifest m = manifest_from_json(std::string(bytes.begin(), bytes.end()));
    for (const auto& rec : m.records) {
        for (const auto& f : rec.files) {
            const auto path = root / f.path;
            if (!std::filesystem::exists(path)) {
                problems.push_back(f.path + ": missing");
            } else if (sha256_file(path) != f.sha256) {
                problems.push_back(f.path + ": checksum mismatch");
            }
        }
    }
    return problems;
}

std::string sha256_hex(const std::vector<unsigned char>& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < length; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
    return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_bytes(path)); }

}  // namespace osm
