#pragma once

#include <string>
#include <vector>

namespace metaglyph::forge {

// Generation knobs. The documented key = value config file carries the
// same fields; defaults here are the shipped configs/default.cfg.
struct ForgeConfig {
    int universe_min = 8;
    int universe_max = 16;
    double category_prob = 0.5;
    std::string template_version = "v1";
    std::vector<std::string> selection_vocab = {"mammal", "bird",    "pet",
                                                "reptile", "predator", "aquatic",
                                                "nocturnal", "domestic"};
    std::vector<std::string> transform_vocab = {"employee", "admin",  "contractor",
                                                "manager",  "guest",  "remote"};
};

// Parses the key = value format ('#' starts a comment). Unknown keys,
// malformed numbers and out-of-range values throw ConfigError.
ForgeConfig parse_forge_config(const std::string& path);
ForgeConfig parse_forge_config_text(const std::string& text);

void validate(const ForgeConfig& config); // throws ConfigError

} // namespace metaglyph::forge
