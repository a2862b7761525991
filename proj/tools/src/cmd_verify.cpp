#include "common.hpp"

#include "osm/errors.hpp"
#include "osm/oracles.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

namespace osm::cli {
namespace {

using Suite = std::function<CheckReport(const VerifyArgs&)>;

DiskScenario disk(const VerifyArgs& a) {
    DiskScenario d;
    d.simulation.n = a.grid_n;
    return d;
}

const std::map<std::string, Suite>& suites() {
    static const std::map<std::string, Suite> table = {
        {"forward-mie", [](const VerifyArgs& a) { return check_forward_mie(disk(a)); }},
        {"theorem1", [](const VerifyArgs& a) { return check_theorem1(disk(a).solve()); }},
        {"theorem2", [](const VerifyArgs& a) { return check_theorem2(disk(a).solve()); }},
        {"theorem2-reciprocal",
         [](const VerifyArgs& a) {
             Theorem2Options o;
             o.reciprocal = true;
             return check_theorem2(disk(a).solve(), o);
         }},
        {"funk-hecke",
         [](const VerifyArgs&) {
             std::vector<CheckReport> parts;
             for (double kx : {0.0, 1.0, 2.5, 5.0, 10.0, 15.0, 20.0}) {
                 for (double angle : {0.0, 0.7, 2.0}) {
                     parts.push_back(check_funk_hecke(6.0, (kx / 6.0) * unit_vector(angle), 256));
                 }
             }
             return merge_reports("funk-hecke", parts);
         }},
        {"helmholtz",
         [](const VerifyArgs&) {
             std::vector<CheckReport> parts;
             for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.3, -0.2}, Vec2{-0.7, 0.7}, Vec2{1.0, 0.0}}) {
                 parts.push_back(check_helmholtz_representation(6.0, 2.0, 512, x));
             }
             return merge_reports("helmholtz-representation", parts);
         }},
        {"decay",
         [](const VerifyArgs& a) {
             const Simulation sim = disk(a).solve();
             std::vector<CheckReport> parts;
             for (int rho : {1, 2}) {
                 DecayOptions o;
                 o.curve.count = 1024;
                 o.params.rho = rho;
                 parts.push_back(check_decay(sim, 1.0, o));
             }
             return merge_reports("decay", parts);
         }},
        {"noise", [](const VerifyArgs& a) { return noise_stability(disk(a).solve()); }},
    };
    return table;
}

}  // namespace

void add_verify(CLI::App& app, VerifyArgs& a) {
    std::vector<std::string> names{"all"};
    for (const auto& [name, suite] : suites()) names.push_back(name);
    app.add_option("--suite", a.suites, "Checks to run (repeatable): " + CLI::detail::join(names, ", "))
        ->check(CLI::IsMember(names));
    app.add_option("--grid-n", a.grid_n, "Solver grid points per side for the disk scenario")
        ->capture_default_str();
    app.add_option("--out", a.out, "Directory for JSON reports")->capture_default_str();
}

int run_verify(const VerifyArgs& a) {
    std::vector<std::string> selected = a.suites;
    if (selected.empty() || std::find(selected.begin(), selected.end(), "all") != selected.end()) {
        selected.clear();
        for (const auto& [name, suite] : suites()) selected.push_back(name);
    }
    const std::filesystem::path out = a.out;
    write_resolved(out, {{"command", "verify"}, {"suite", selected}, {"grid-n", a.grid_n}, {"out", a.out}});

    bool all_pass = true;
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& name : selected) {
        const CheckReport report = suites().at(name)(a);
        std::ofstream(out / (name + ".json")) << report.to_json() << '\n';
        std::cout << (report.pass ? "PASS " : "FAIL ") << name << "  max_error=" << report.max_error
                  << " tolerance=" << report.tolerance << '\n';
        summary.push_back({{"suite", name}, {"pass", report.pass}});
        all_pass = all_pass && report.pass;
    }
    std::ofstream(out / "summary.json") << summary.dump(2) << '\n';
    return all_pass ? kOk : kCheckFailed;
}

}  // namespace osm::cli
