#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../errors.hpp"

namespace lmlab::cli {

struct UsageError : Error {
    using Error::Error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace detail

// Reads key=value lines ('#' starts a comment) into "--key=value" arguments.
inline std::vector<std::string> read_config(const std::string& path, const CLI::App& sub) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot read " + path);
    std::vector<std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("--config " + path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        const CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
        }
        if (!opt || key == "config" || key == "help")
            throw UsageError("--config " + path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

// Splices config-file arguments in right after the subcommand name so that later
// command-line flags win (every single-valued option keeps its last occurrence).
inline std::vector<std::string> apply_config_file(std::vector<std::string> args, const CLI::App& app) {
    if (args.empty()) return args;
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands({}))
        if (s->get_name() == args[0]) sub = s;
    if (!sub) return args;
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return args;
    const auto extra = read_config(path, *sub);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

} // namespace lmlab::cli
