#include "common.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace osm::cli {

std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty() || args.size() < 2) return args;

    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
    nlohmann::json config;
    try {
        config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    if (!config.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : config.items()) {
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            injected.push_back(flag + "=" + (value.get<bool>() ? "true" : "false"));
        } else if (value.is_array()) {
            for (const auto& v : value) {
                injected.push_back(flag);
                injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
        } else {
            injected.push_back(flag);
            injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    // argv[1] is the subcommand; file values go right after it.
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

void write_resolved(const std::filesystem::path& out, const nlohmann::json& config) {
    std::filesystem::create_directories(out);
    std::ofstream file(out / "config.resolved.json");
    file << config.dump(2) << '\n';
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }
void info(const std::string& message) { std::cerr << message << '\n'; }

}  // namespace osm::cli
