#pragma once

#include <map>
#include <string>
#include <string_view>

#include "metaglyph/glyph/ast.hpp"

namespace metaglyph::glyph {

// Bijection from the 13 operators onto nonsense glyphs. The default
// table pins ∈→⊙, ∩→⊕, ¬→⊗, ⇒→⊛ and assigns the remaining operators,
// in inventory order, to ⊘ ⊚ ⊞ ⊟ ⊠ ⊡ ⊜ ⊝ ⧆.
class ControlAlphabet {
public:
    // Throws ConfigError unless the mapping is a bijection over all 13
    // operators and no image collides with an operator glyph.
    explicit ControlAlphabet(std::map<Op, std::string> mapping);

    static const ControlAlphabet& standard();

    const std::string& substitute(Op op) const;
    const std::map<Op, std::string>& mapping() const { return mapping_; }

private:
    std::map<Op, std::string> mapping_;
};

// Replaces every operator glyph in `mg_text` via the bijection, leaving
// all other bytes untouched. Whitespace token count is preserved and
// the output contains none of the 13 operator glyphs.
std::string to_control(std::string_view mg_text, const ControlAlphabet& alphabet);
std::string to_control(std::string_view mg_text);

// True if `text` contains any of the 13 operator glyphs.
bool contains_operator_glyph(std::string_view text);

} // namespace metaglyph::glyph
