#include "metaglyph/util/jsonl.hpp"

#include <fstream>

#include "metaglyph/errors.hpp"

namespace metaglyph::util {

std::vector<Json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::vector<Json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            rows.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw DomainError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::string& path, const std::vector<Json>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DomainError("cannot write " + path);
    for (const auto& row : rows) {
        out << to_line(row) << '\n';
    }
}

void append_jsonl(const std::string& path, const Json& row) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw DomainError("cannot append to " + path);
    out << to_line(row) << '\n';
    out.flush();
}

std::string to_line(const Json& row) {
    return row.dump(-1, ' ', false, Json::error_handler_t::strict);
}

} // namespace metaglyph::util
