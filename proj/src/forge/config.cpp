#include "metaglyph/forge/config.hpp"

#include <fstream>
#include <sstream>

#include "metaglyph/errors.hpp"

namespace metaglyph::forge {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        part = trim(part);
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

} // namespace

void validate(const ForgeConfig& config) {
    if (config.universe_min < 1) throw ConfigError("universe_min must be at least 1");
    if (config.universe_max < config.universe_min) {
        throw ConfigError("universe_max must be >= universe_min");
    }
    if (config.category_prob <= 0.0 || config.category_prob >= 1.0) {
        throw ConfigError("category_prob must lie strictly between 0 and 1");
    }
    if (config.selection_vocab.size() < 4) {
        throw ConfigError("selection_vocab needs at least 4 labels");
    }
    if (config.transform_vocab.size() < 4) {
        throw ConfigError("transform_vocab needs at least 4 labels");
    }
}

ForgeConfig parse_forge_config_text(const std::string& text) {
    ForgeConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "universe_min") config.universe_min = parse_int(key, value);
        else if (key == "universe_max") config.universe_max = parse_int(key, value);
        else if (key == "category_prob") config.category_prob = parse_double(key, value);
        else if (key == "template_version") config.template_version = value;
        else if (key == "selection_vocab") config.selection_vocab = split_list(value);
        else if (key == "transform_vocab") config.transform_vocab = split_list(value);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    validate(config);
    return config;
}

ForgeConfig parse_forge_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_forge_config_text(buffer.str());
}

} // namespace metaglyph::forge
