#pragma once

// Flat "key = value" config files.  Each entry becomes a long option appended
// to the command line unless that option was already given there, so flags
// override the file.

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabitherm::cli {

struct ConfigEntry {
    std::string key;
    std::string value;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<ConfigEntry> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    std::vector<ConfigEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        key.erase(0, key.find_first_not_of('-'));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty()) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        }
        entries.push_back({key, value});
    }
    return entries;
}

/// Finds the --config path in argv, if any.
inline std::string find_config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return "";
}

inline bool option_given(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin() + 1, args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

/// Appends config entries not already present.  Boolean flags are written as
/// "key = true" and expand to a bare "--key".
inline std::vector<std::string> merge_config(std::vector<std::string> args,
                                             const std::vector<ConfigEntry>& entries,
                                             const std::vector<std::string>& flag_names) {
    const std::vector<std::string> original = args;
    for (const auto& e : entries) {
        if (e.key == "config" || option_given(original, e.key)) continue;
        if (std::find(flag_names.begin(), flag_names.end(), e.key) != flag_names.end()) {
            if (e.value == "true" || e.value == "1" || e.value == "yes" || e.value == "on") {
                args.push_back("--" + e.key);
            } else if (!(e.value == "false" || e.value == "0" || e.value == "no" || e.value == "off")) {
                throw std::invalid_argument("config: flag '" + e.key + "' needs a boolean value");
            }
            continue;
        }
        args.push_back("--" + e.key);
        args.push_back(e.value);
    }
    return args;
}

}  // namespace rabitherm::cli
