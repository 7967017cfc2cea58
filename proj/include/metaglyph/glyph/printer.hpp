#pragma once

#include <string>

#include "metaglyph/glyph/ast.hpp"

namespace metaglyph::glyph {

// Canonical single-space-separated form. Grouping parentheses are
// standalone tokens ("( ∈(a) ∪ ∈(b) ) ∩ ¬(c)"); predicate parentheses
// attach to their glyph ("∈(a)"). parse(print(i)) == i structurally.
std::string print_instruction(const Instruction& instr);
std::string print_expr(const ExprPtr& expr);
std::string print_action(const ActionClause& action);
std::string print_task(const Task& task);

// Indented tree dump for the debug CLI.
std::string dump_tree(const Instruction& instr);

} // namespace metaglyph::glyph
