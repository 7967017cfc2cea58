#include "metaglyph/metrics/parse_output.hpp"

#include <cctype>

#include "metaglyph/errors.hpp"

namespace metaglyph::metrics {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) begin++;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) end--;
    return s.substr(begin, end - begin);
}

std::optional<util::Json> try_parse(const std::string& text) {
    util::Json value = util::Json::parse(text, nullptr, false);
    if (value.is_discarded()) return std::nullopt;
    return value;
}

bool looks_fenced(const std::string& trimmed) {
    return trimmed.size() >= 6 && trimmed.compare(0, 3, "```") == 0 &&
           trimmed.compare(trimmed.size() - 3, 3, "```") == 0;
}

// Content between the opening fence line (``` with an optional language
// tag) and the closing ``` line.
std::optional<std::string> strip_one_fence(const std::string& trimmed) {
    const std::size_t open_end = trimmed.find('\n');
    if (open_end == std::string::npos) return std::nullopt;
    const std::string tag = trim(trimmed.substr(3, open_end - 3));
    for (char c : tag) {
        if (!std::isalnum(static_cast<unsigned char>(c))) return std::nullopt;
    }
    const std::size_t close = trimmed.rfind("```");
    if (close <= open_end) return std::nullopt;
    return trimmed.substr(open_end + 1, close - open_end - 1);
}

} // namespace

std::string parse_mode_key(ParseMode mode) {
    return mode == ParseMode::Strict ? "strict" : "lenient";
}

ParseMode parse_mode_from_key(const std::string& key) {
    if (key == "strict") return ParseMode::Strict;
    if (key == "lenient") return ParseMode::Lenient;
    throw ConfigError("unknown parse mode: " + key);
}

ParsedOutput parse_output(const std::string& raw, ParseMode mode) {
    const std::string trimmed = trim(raw);
    if (trimmed.empty()) return {ParseStatus::Empty, std::nullopt, false};
    if (auto value = try_parse(trimmed)) return {ParseStatus::Ok, std::move(value), false};
    if (looks_fenced(trimmed)) {
        if (mode == ParseMode::Lenient) {
            if (auto inner = strip_one_fence(trimmed)) {
                if (auto value = try_parse(trim(*inner))) {
                    return {ParseStatus::Ok, std::move(value), true};
                }
            }
        }
        return {ParseStatus::Fenced, std::nullopt, false};
    }
    return {ParseStatus::Invalid, std::nullopt, false};
}

} // namespace metaglyph::metrics
