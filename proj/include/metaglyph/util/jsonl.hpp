#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace metaglyph::util {

using Json = nlohmann::json;

// Reads a JSON-Lines file. Blank lines are skipped; a malformed line
// throws DomainError naming the line number.
std::vector<Json> read_jsonl(const std::string& path);

// Writes one object per line. Keys are emitted in sorted order (nlohmann
// default), so output bytes are deterministic.
void write_jsonl(const std::string& path, const std::vector<Json>& rows);

// Appends a single row, flushing before return.
void append_jsonl(const std::string& path, const Json& row);

// Serializes with sorted keys and no added whitespace.
std::string to_line(const Json& row);

} // namespace metaglyph::util
