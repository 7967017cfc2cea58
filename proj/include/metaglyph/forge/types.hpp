#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metaglyph/glyph/ast.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::forge {

struct Item {
    std::string name;                 // unique within a universe
    std::vector<std::string> categories; // sorted, nonempty
    std::map<std::string, std::string> attributes;
};

struct ItemUniverse {
    std::vector<Item> items;
    std::vector<std::string> vocab; // sorted category labels
    std::uint64_t seed = 0;
};

enum class TaskFamily {
    Selection,
    Extraction,
    ConstraintComposition,
    ConditionalTransformation,
};

inline constexpr TaskFamily kAllFamilies[] = {
    TaskFamily::Selection,
    TaskFamily::Extraction,
    TaskFamily::ConstraintComposition,
    TaskFamily::ConditionalTransformation,
};

// Stable snake_case key used in ids, JSON files and reports.
std::string family_key(TaskFamily family);
TaskFamily family_from_key(const std::string& key); // ConfigError on unknown key

struct TaskInstance {
    std::string id;
    TaskFamily family = TaskFamily::Selection;
    ItemUniverse universe;    // empty for Extraction
    std::string source_text;  // Extraction only
    // Extraction plant record: (sentence, category) in report order.
    std::vector<std::pair<std::string, std::string>> sentences;
    glyph::Instruction instruction;
    util::Json gold; // filled by the oracle (Extraction: planted at generation)
    std::uint64_t seed = 0;
};

struct PromptTriplet {
    std::string nl;
    std::string mg;
    std::string ctrl;
    int nl_tokens = 0;
    int mg_tokens = 0;
    int ctrl_tokens = 0;
};

util::Json instance_to_json(const TaskInstance& instance);
TaskInstance instance_from_json(const util::Json& row);

} // namespace metaglyph::forge
