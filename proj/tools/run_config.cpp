#include "run_config.hpp"

#include "fraclog/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fraclog::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    KeyValues out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError(path + ": line " + std::to_string(number) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InputError(path + ": line " + std::to_string(number) + ": empty key");
        std::replace(key.begin(), key.end(), '_', '-');
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& argv, const std::vector<std::string>& subcommands) {
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        const std::string& a = argv[i];
        if (a == "--config") {
            if (i + 1 >= argv.size()) throw InputError("--config needs a file");
            config_path = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (config_path.empty()) return rest;
    const KeyValues entries = read_config_file(config_path);
    auto sub = std::find_if(rest.begin() + (rest.empty() ? 0 : 1), rest.end(), [&](const std::string& a) {
        return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
    });
    std::vector<std::string> injected;
    for (const auto& [key, value] : entries) {
        if (key == "command") continue;
        injected.push_back("--" + key);
        injected.push_back(value);
    }
    if (sub == rest.end()) {
        // The subcommand may come from the file; remaining flags then follow it.
        auto it = std::find_if(entries.begin(), entries.end(), [](const auto& kv) { return kv.first == "command"; });
        if (it == entries.end()) return rest;
        injected.insert(injected.begin(), it->second);
        rest.insert(rest.begin() + (rest.empty() ? 0 : 1), injected.begin(), injected.end());
        return rest;
    }
    rest.insert(sub + 1, injected.begin(), injected.end());
    return rest;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(what + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw InputError(what + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const std::string& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(what + ": '" + item + "' is not an integer");
        }
    }
    if (out.empty()) throw InputError(what + ": empty list");
    return out;
}

}  // namespace fraclog::cli
