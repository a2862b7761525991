#include "common.hpp"

#include "osm/dataset.hpp"

#include <fstream>
#include <sstream>

namespace osm::cli {

void add_dataset(CLI::App& app, DatasetArgs& a) {
    app.add_option("--spec", a.spec, "Dataset spec JSON (defaults are used for absent fields)")
        ->check(CLI::ExistingFile);
    app.add_option("--count", a.count, "Number of pairs (overrides the spec)");
    app.add_option("--seed", a.seed, "Master seed (overrides the spec)");
    app.add_option("--noise", a.noise, "Relative noise level delta (fraction, overrides the spec)");
    app.add_option("--out", a.out, "Output directory (overrides the spec)");
}

int run_dataset(const DatasetArgs& a) {
    DatasetSpec spec;
    if (!a.spec.empty()) {
        std::ifstream in(a.spec);
        std::stringstream text;
        text << in.rdbuf();
        spec = dataset_spec_from_json(text.str());
    }
    if (a.count >= 0) spec.count = a.count;
    if (a.seed >= 0) spec.seed = static_cast<std::uint64_t>(a.seed);
    if (a.noise >= 0.0) spec.noise = a.noise;
    if (!a.out.empty()) spec.output_dir = a.out;
    spec.validate();

    auto resolved = nlohmann::json::parse(dataset_spec_to_json(spec));
    resolved["command"] = "dataset";
    write_resolved(spec.output_dir, resolved);

    const Manifest manifest = generate(spec);
    info("wrote " + std::to_string(manifest.records.size() - manifest.failed()) + " pairs to " +
         spec.output_dir.string());
    if (manifest.failed() > 0) {
        warn(std::to_string(manifest.failed()) + " samples failed; see manifest.json");
        return kNumerical;
    }
    return kOk;
}

}  // namespace osm::cli
