#include "common.hpp"

#include "osm/errors.hpp"

#include <iostream>

using namespace osm::cli;

int main(int argc, char** argv) {
    CLI::App app{"Orthogonality-sampling imaging toolkit: forward solver, indicators, checks, datasets", "osm"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SimulateArgs simulate;
    ImageArgs image;
    VerifyArgs verify;
    DatasetArgs dataset;
    FresnelArgs fresnel;
    std::string config;

    struct Entry {
        CLI::App* sub;
        std::function<int()> run;
    };
    std::vector<Entry> entries;
    auto add = [&](const char* name, const char* about, auto adder, auto& args, auto runner) {
        CLI::App* sub = app.add_subcommand(name, about);
        sub->add_option("--config", config, "JSON file of flag values; explicit flags override it");
        adder(*sub, args);
        entries.push_back({sub, [&args, runner] { return runner(args); }});
    };
    add("simulate", "Solve the forward problem and write Cauchy data", add_simulate, simulate, run_simulate);
    add("image", "Evaluate an indicator on a sampling grid", add_image, image, run_image);
    add("verify", "Run numerical identity checks", add_verify, verify, run_verify);
    add("dataset", "Generate (true, preliminary) image pairs", add_dataset, dataset, run_dataset);
    add("fresnel", "Image an experimental .exp file", add_fresnel, fresnel, run_fresnel);

    try {
        auto args = expand_config(argc, argv);
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::Error& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        for (const auto& e : entries) {
            if (e.sub->parsed()) return e.run();
        }
    } catch (const osm::SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const osm::AccuracyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsage;
}
