#include "metaglyph/glyph/control.hpp"

#include <set>

#include "metaglyph/errors.hpp"
#include "metaglyph/glyph/operators.hpp"

namespace metaglyph::glyph {

namespace {

// Decodes the byte length of the UTF-8 sequence starting at `i`, or 0 on
// a malformed lead byte.
std::size_t sequence_length(std::string_view text, std::size_t i) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    if ((lead & 0x80) == 0x00) len = 1;
    else if ((lead & 0xE0) == 0xC0) len = 2;
    else if ((lead & 0xF0) == 0xE0) len = 3;
    else if ((lead & 0xF8) == 0xF0) len = 4;
    if (len == 0 || i + len > text.size()) return 0;
    return len;
}

} // namespace

ControlAlphabet::ControlAlphabet(std::map<Op, std::string> mapping)
    : mapping_(std::move(mapping)) {
    if (mapping_.size() != static_cast<std::size_t>(kOperatorCount)) {
        throw ConfigError("control alphabet must map all 13 operators");
    }
    std::set<std::string> images;
    for (const auto& [op, image] : mapping_) {
        if (image.empty()) {
            throw ConfigError("control alphabet image for " + std::string(name_of(op)) +
                              " is empty");
        }
        if (!images.insert(image).second) {
            throw ConfigError("control alphabet images collide on '" + image + "'");
        }
        if (op_from_glyph(image)) {
            throw ConfigError("control alphabet image '" + image +
                              "' is an operator glyph");
        }
    }
}

const ControlAlphabet& ControlAlphabet::standard() {
    static const ControlAlphabet table{{
        {Op::MemberOf, "⊙"},    // ⊙ (paper-seeded)
        {Op::Intersect, "⊕"},   // ⊕ (paper-seeded)
        {Op::Negation, "⊗"},    // ⊗ (paper-seeded)
        {Op::Implication, "⊛"}, // ⊛
        {Op::NotMemberOf, "⊘"}, // ⊘
        {Op::Union, "⊚"},       // ⊚
        {Op::Arrow, "⊞"},       // ⊞
        {Op::Compose, "⊟"},     // ⊟
        {Op::ForAll, "⊠"},      // ⊠
        {Op::Exists, "⊡"},      // ⊡
        {Op::SubsetOf, "⊜"},    // ⊜
        {Op::MapsTo, "⊝"},      // ⊝
        {Op::Restrict, "⧆"},    // ⧆
    }};
    return table;
}

const std::string& ControlAlphabet::substitute(Op op) const {
    return mapping_.at(op);
}

std::string to_control(std::string_view mg_text, const ControlAlphabet& alphabet) {
    std::string out;
    out.reserve(mg_text.size());
    std::size_t i = 0;
    while (i < mg_text.size()) {
        const std::size_t len = sequence_length(mg_text, i);
        if (len == 0) {
            throw DomainError("malformed UTF-8 in glyph text");
        }
        const auto seq = mg_text.substr(i, len);
        if (auto op = op_from_glyph(seq)) {
            out += alphabet.substitute(*op);
        } else {
            out += seq;
        }
        i += len;
    }
    return out;
}

std::string to_control(std::string_view mg_text) {
    return to_control(mg_text, ControlAlphabet::standard());
}

bool contains_operator_glyph(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t len = sequence_length(text, i);
        if (len == 0) return false;
        if (op_from_glyph(text.substr(i, len))) return true;
        i += len;
    }
    return false;
}

} // namespace metaglyph::glyph
