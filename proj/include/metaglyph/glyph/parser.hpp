#pragma once

#include <string_view>

#include "metaglyph/glyph/ast.hpp"

namespace metaglyph::glyph {

// Parses one instruction: anchor [ | constraint ] (⇒|→) task.
// Precedence, tightest to loosest: ¬, ∩, ∪, |, ⇒. Parentheses override.
// Double negation is normalized away; ¬(C) is membership negation.
// Throws SyntaxError with a byte offset on malformed input.
Instruction parse_instruction(std::string_view text);

// Parses a standalone expression (constraint grammar, plus a top-level
// `anchor | constraint` restriction). Used by tests and bindings.
ExprPtr parse_expression(std::string_view text);

} // namespace metaglyph::glyph
