#pragma once

#include "osm/forward.hpp"
#include "osm/image.hpp"
#include "osm/random.hpp"
#include "osm/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace osm {

/// us += delta ||us|| zeta / ||zeta|| with zeta standard complex Gaussian, and
/// the same independently for dus. The relative perturbation of each vector
/// is exactly delta (up to rounding). Vectors with zero norm are left as is.
CauchyData add_noise(const CauchyData& data, double delta, Rng& rng);

struct ThetaCount {
    double theta_deg = 90.0;
    int count = 0;
};

struct DatasetSpec {
    int count = 4;
    double one_ellipse_fraction = 0.5;  // the rest are two-ellipse scenes
    std::vector<ThetaCount> thetas;     // empty: every sample at 90 degrees
    double k = 6.0;
    ContrastDistribution contrast;
    double noise = 0.0;  // relative delta, evaluation-time knob
    CurveDescriptor curve;
    int solver_n = 256;
    int supersample = kDefaultSupersample;
    double solver_tolerance = 1e-6;
    int max_iterations = 1000;
    int image_size = 160;
    int sampling_n = 64;
    int rho = 2;
    std::uint64_t seed = 7;
    std::filesystem::path output_dir = "dataset";
    bool previews = true;
    /// Restrict generation to these sample ids (all of [0, count) when empty).
    std::vector<int> ids;

    void validate() const;
    /// Incident direction of sample `id` in degrees, from the cumulative
    /// theta counts.
    double theta_of(int id) const;
    std::vector<int> sample_ids() const;
};

std::string dataset_spec_to_json(const DatasetSpec& spec);
DatasetSpec dataset_spec_from_json(std::string_view text);

struct SampleMeta {
    std::string id;
    std::string family;
    std::string scene_json;
    double theta_deg = 90.0;
    double k = 6.0;
    std::uint64_t seed = 0;
    double noise = 0.0;
    int iterations = 0;
    bool degenerate = false;
};

struct SamplePair {
    PixelImage truth;
    PixelImage prelim;
    SampleMeta meta;
};

enum class AugmentKind { HFlip, VFlip, Rot90, Rot270, Zoom };

AugmentKind parse_augment(std::string_view name);
std::string_view augment_name(AugmentKind kind);

PixelImage hflip(const PixelImage& image);
PixelImage vflip(const PixelImage& image);
/// Counter-clockwise quarter turn.
PixelImage rot90(const PixelImage& image);
PixelImage rot270(const PixelImage& image);
/// Bilinear upscale of a square image by 5% (160 -> 168) followed by a crop
/// back to the original size at (offset_col, offset_row).
PixelImage zoom_crop(const PixelImage& image, int offset_col, int offset_row);
int zoom_size(int size);

/// Applies the same transform to both images. The zoom crop offset is drawn
/// once from `rng` and shared; the zoomed truth is re-binarized at 0.5.
SamplePair augment(const SamplePair& pair, AugmentKind kind, Rng& rng);

/// Builds one pair in memory (no I/O). Throws SolverError on non-convergence.
SamplePair make_sample(const DatasetSpec& spec, int id);

struct ManifestFile {
    std::string path;    // relative to the dataset root
    std::string sha256;  // lowercase hex
};

struct ManifestRecord {
    std::string id;
    std::string status = "ok";  // "ok" or "failed"
    std::string error;
    std::vector<ManifestFile> files;
};

struct Manifest {
    int version = 1;
    DatasetSpec spec;
    std::vector<ManifestRecord> records;

    std::size_t failed() const;
};

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view text);

/// Writes pairs/<id>_true.osmi, <id>_prelim.osmi, <id>_meta.json (plus PNG
/// previews) for every sample, then manifest.json last. Failed samples are
/// recorded in the manifest, never dropped.
Manifest generate(const DatasetSpec& spec);

/// Re-hashes every listed file; returns human-readable problems (empty when
/// the tree is intact).
std::vector<std::string> verify_manifest(const std::filesystem::path& root);

std::string sha256_hex(const std::vector<unsigned char>& bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string sample_id(int id);

}  // namespace osm
