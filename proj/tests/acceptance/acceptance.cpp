// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only when
// every selected criterion passes.

#include "osm/dataset.hpp"
#include "osm/fresnel.hpp"
#include "osm/oracles.hpp"
#include "osm/specfun.hpp"

#include "series.hpp"
#include "standins.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace osm;

namespace {

constexpr double kPi = std::numbers::pi;
const fs::path kCli = OSM_CLI_PATH;
const fs::path kData = OSM_TEST_DATA_DIR;

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;  // one per sub-check

    void add(bool ok, const std::string& text) {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + text);
    }
};

std::string fmt(const char* f, auto... v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Simulation& disk() {
    static const Simulation sim = DiskScenario{}.solve();
    return sim;
}

Outcome theorem1(const fs::path&) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Simulation sim = DiskScenario{}.solve();
    const CheckReport r = check_theorem1(sim);
    const double elapsed = seconds_since(t0);
    o.add(r.pass, fmt("64x64 grid, N=256, R=100, 32 points: max relative error %.3e (tolerance %.0e)", r.max_error, r.tolerance));
    o.add(elapsed < 120.0, fmt("runtime %.1f s (limit 120 s)", elapsed));
    return o;
}

Outcome theorem2(const fs::path&) {
    Outcome o;
    const CheckReport r = check_theorem2(disk());
    o.add(r.pass, fmt("I = gamma * OSM^rho, 128 directions, gamma = %.7f: max relative error %.3e (tolerance %.0e)",
                      gamma_constant(2, 6.0, 2), r.max_error, r.tolerance));
    Theorem2Options recip;
    recip.reciprocal = true;
    const CheckReport rr = check_theorem2(disk(), recip);
    o.lines.push_back(fmt("note gamma * I = OSM^rho holds with max relative error %.3e", rr.max_error));
    return o;
}

Outcome forward_mie(const fs::path&) {
    Outcome o;
    std::vector<double> errors;
    for (int n : {128, 256, 512}) {
        DiskScenario s;
        s.simulation.n = n;
        const CheckReport r = check_forward_mie(s);
        errors.push_back(r.max_error);
        if (n == 256) o.add(r.pass, fmt("N=256 relative L2 error %.3e (tolerance 1e-3)", r.max_error));
    }
    o.add(errors[1] < errors[0] && errors[2] < errors[1],
          fmt("errors for N = 128, 256, 512: %.3e, %.3e, %.3e (monotone)", errors[0], errors[1], errors[2]));
    return o;
}

Outcome identities(const fs::path&) {
    Outcome o;
    double worst_fh = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double kx = 20.0 * i / 40;
        for (double k : {1.0, 6.0}) {
            const Vec2 x = (kx / k) * unit_vector(0.37 * i);
            worst_fh = std::max(worst_fh, check_funk_hecke(k, x, 256).max_error);
        }
    }
    o.add(worst_fh <= 1e-8, fmt("Funk-Hecke, k|x| in [0, 20], 256 nodes: max error %.3e (tolerance 1e-8)", worst_fh));
    double worst_h = 0.0;
    for (const Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.3, -0.2}, Vec2{-0.7, 0.7}, Vec2{1.0, 0.0}, Vec2{0.0, -1.0}}) {
        for (double theta : {kPi / 2, 0.3, 4.0}) {
            worst_h = std::max(worst_h, check_helmholtz_representation(6.0, 2.0, 512, x, theta).max_error);
        }
    }
    o.add(worst_h <= 1e-6, fmt("Helmholtz representation, R=2, k=6, 512 nodes: max error %.3e (tolerance 1e-6)", worst_h));
    return o;
}

Outcome decay(const fs::path&) {
    Outcome o;
    for (int rho : {1, 2}) {
        DecayOptions opt;
        opt.curve.count = 1024;
        opt.params.rho = rho;
        const CheckReport r = check_decay(disk(), 1.0, opt);
        o.add(r.pass, fmt("rho=%d: slope %.4f vs %.1f, relative error %.3f (tolerance 0.15)", rho,
                          r.diagnostics[0].value, r.diagnostics[0].reference, r.max_error));
    }
    return o;
}

Outcome noise(const fs::path&) {
    Outcome o;
    const CheckReport r = noise_stability(disk());
    std::string means;
    bool monotone = true;
    for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
        means += fmt("%s%.4f", i ? ", " : "", r.diagnostics[i].value);
        if (i) monotone = monotone && r.diagnostics[i].value <= r.diagnostics[i - 1].value;
    }
    o.add(r.diagnostics[0].value >= 0.90, fmt("delta 5%%: mean correlation %.4f over 10 seeds (minimum 0.90)", r.diagnostics[0].value));
    o.add(monotone, "correlations for delta 5, 7, 10, 15%: " + means + " (non-increasing)");
    return o;
}

Outcome specfun_check(const fs::path&) {
    using namespace osm::specfun;
    using osm::testing::series_j;
    Outcome o;
    double worst = 0.0;
    for (int i = 1; i <= 8000; ++i) {
        const double x = 8.0 * i / 8000;
        worst = std::max(worst, std::abs(bessel_j0(x) - double(series_j(0, x))));
        worst = std::max(worst, std::abs(bessel_j1(x) - double(series_j(1, x))));
        worst = std::max(worst, std::abs(bessel_y0(x) - double(osm::testing::series_y0(x))));
        worst = std::max(worst, std::abs(bessel_y1(x) - double(osm::testing::series_y1(x))));
        const double jj = double(series_j(0, x)), yy = double(osm::testing::series_y0(x));
        worst = std::max(worst, std::abs(hankel1(0, x) - std::complex<double>(jj, yy)));
        worst = std::max(worst, std::abs(spherical_j0(x) - std::sin(x) / x));
    }
    o.add(worst <= 1e-10, fmt("series oracles on (0, 8]: max abs error %.3e (tolerance 1e-10)", worst));
    double wr = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = 0.1 * std::pow(1000.0, i / 999.0);
        wr = std::max(wr, std::abs(bessel_j1(x) * bessel_y0(x) - bessel_j0(x) * bessel_y1(x) - 2.0 / (kPi * x)));
    }
    o.add(wr <= 1e-9, fmt("Wronskian on [0.1, 100]: max error %.3e (tolerance 1e-9)", wr));
    return o;
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + kCli.string() + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree_hashes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = sha256_file(e.path());
    }
    return out;
}

Outcome determinism(const fs::path& work) {
    Outcome o;
    const fs::path dir = work / "determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "spec.json") << R"({"count": 20, "seed": 7})";
    const std::string cmd = "dataset --spec \"" + (dir / "spec.json").string() + "\" --out \"" + (dir / "tree").string() + "\"";

    auto t0 = std::chrono::steady_clock::now();
    const int first = run_cli(cmd);
    const double elapsed = seconds_since(t0);
    const auto a = first == 0 ? tree_hashes(dir / "tree") : std::map<std::string, std::string>{};
    fs::rename(dir / "tree", dir / "tree_first");
    const int second = run_cli(cmd);
    const auto b = second == 0 ? tree_hashes(dir / "tree") : std::map<std::string, std::string>{};
    o.add(first == 0 && second == 0 && !a.empty() && a == b,
          fmt("20-pair dataset, two runs: %zu files, byte-identical: %s", a.size(), a == b ? "yes" : "no"));
    o.add(elapsed < 600.0, fmt("generation time %.1f s (limit 600 s)", elapsed));
    o.add(verify_manifest(dir / "tree").empty(), "manifest checksums validate");
    return o;
}

Outcome fresnel(const fs::path&) {
    Outcome o;
    bool round_trip = true;
    for (const char* name : {"two_records.exp", "with_header.exp"}) {
        const FresnelSet set = read_fresnel(kData / name);
        const FresnelSet back = parse_fresnel(serialize_fresnel(set));
        round_trip = round_trip && back.records == set.records;
    }
    o.add(round_trip, "parser round trip on fixtures");

    const double k = fresnel_wave_number(8.0);
    o.add(std::abs(k - 6.708) <= 0.001, fmt("k at 8 GHz = %.6f (expected 6.708 +- 0.001)", k));

    SyntheticFresnelOptions opt;
    opt.tx_deg = testing::kStandinTxDeg;
    const FresnelSet set = synthetic_fresnel_set(testing::dielectric_standin(), opt);
    const ScatteredArc arc = to_scattered(set, 8.0, opt.tx_deg);
    o.add(arc.curve.size() == 49, fmt("receivers on the 60-300 deg arc, 5 deg step: %zu", arc.curve.size()));

    const FresnelImage img = image_fresnel(set, 8.0, opt.tx_deg);
    const auto pts = img.result.grid.points();
    const Vec2 peak = pts[std::max_element(img.result.values.begin(), img.result.values.end()) - img.result.values.begin()];
    const double dist = distance(peak, testing::kStandinCenter);
    o.add(dist <= testing::kStandinRadius,
          fmt("15 mm disk stand-in: argmax (%.3f, %.3f) at %.3f from the centre (radius %.3f)", peak.x, peak.y, dist,
              testing::kStandinRadius));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome(const fs::path&)>>> criteria{
        {"theorem1", theorem1},       {"theorem2", theorem2}, {"forward-mie", forward_mie},
        {"identities", identities},   {"decay", decay},       {"noise", noise},
        {"specfun", specfun_check},   {"determinism", determinism}, {"fresnel", fresnel},
    };
    std::vector<std::string> names;
    for (const auto& c : criteria) names.push_back(c.first);

    CLI::App app{"Acceptance criteria", "osm_acceptance"};
    std::vector<std::string> selected;
    std::string work = (fs::temp_directory_path() / "osm_acceptance").string();
    app.add_option("--criterion", selected, "Criterion to run (repeatable; default all)")->check(CLI::IsMember(names));
    app.add_option("--work-dir", work, "Scratch directory for generated files");
    CLI11_PARSE(app, argc, argv);
    if (selected.empty()) selected = names;
    fs::create_directories(work);

    bool all = true;
    for (const auto& [name, fn] : criteria) {
        if (std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
        Outcome o;
        try {
            o = fn(work);
        } catch (const std::exception& e) {
            o.add(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << '\n';
        for (const auto& l : o.lines) std::cout << "       " << l << '\n';
        std::cout.flush();
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
