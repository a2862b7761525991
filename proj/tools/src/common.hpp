#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace osm::cli {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

/// Turns `--config FILE` (a flat JSON object keyed by flag names) into
/// command-line tokens placed before the user's own flags, so explicit flags
/// win. Returns the rewritten argument list.
std::vector<std::string> expand_config(int argc, char** argv);

/// Writes `<out>/config.resolved.json`.
void write_resolved(const std::filesystem::path& out, const nlohmann::json& config);

void warn(const std::string& message);
void info(const std::string& message);

struct SimulateArgs {
    std::string scene;
    double k = 6.0;
    double theta_deg = 90.0;
    double curve_radius = 100.0;
    int curve_count = 32;
    double arc_start_deg = 0.0;
    double arc_end_deg = 360.0;
    bool arc = false;
    int grid_n = 256;
    int supersample = 8;
    double tolerance = 1e-6;
    std::string out = "out";
};
void add_simulate(CLI::App& app, SimulateArgs& args);
int run_simulate(const SimulateArgs& args);

struct ImageArgs {
    std::string data;
    std::string indicator = "nearfield";
    int rho = 2;
    int grid_n = 64;
    double extent = 2.0;
    bool normalize = true;
    int image_size = 160;
    std::string out = "out";
};
void add_image(CLI::App& app, ImageArgs& args);
int run_image(const ImageArgs& args);

struct VerifyArgs {
    std::vector<std::string> suites;
    std::string out = "verify";
    int grid_n = 256;
};
void add_verify(CLI::App& app, VerifyArgs& args);
int run_verify(const VerifyArgs& args);

struct DatasetArgs {
    std::string spec;
    int count = -1;
    long long seed = -1;
    double noise = -1.0;
    std::string out;
};
void add_dataset(CLI::App& app, DatasetArgs& args);
int run_dataset(const DatasetArgs& args);

struct FresnelArgs {
    std::string input;
    std::string columns = "tx,rx,freq,total_re,total_im,inc_re,inc_im";
    bool lenient = false;
    double freq_ghz = 8.0;
    double tx_deg = 0.0;
    int rho = 2;
    int grid_n = 64;
    double extent = 2.0;
    int image_size = 160;
    std::string out = "out";
};
void add_fresnel(CLI::App& app, FresnelArgs& args);
int run_fresnel(const FresnelArgs& args);

}  // namespace osm::cli
