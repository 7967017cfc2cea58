#pragma once

#include <optional>
#include <string>

#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::metrics {

enum class ParseStatus { Ok, Fenced, Invalid, Empty };

// Strict reproduces the scored treatment: a fenced block is a parse
// failure. Lenient strips one outer ``` fence first (diagnosis mode).
enum class ParseMode { Strict, Lenient };

std::string parse_mode_key(ParseMode mode);
ParseMode parse_mode_from_key(const std::string& key); // ConfigError on unknown key

struct ParsedOutput {
    ParseStatus status = ParseStatus::Invalid;
    std::optional<util::Json> value; // present iff status == Ok
    bool fence_stripped = false;
};

// Never throws: failures are statuses.
ParsedOutput parse_output(const std::string& raw, ParseMode mode);

} // namespace metaglyph::metrics
