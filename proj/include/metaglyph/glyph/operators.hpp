#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaglyph/glyph/ast.hpp"

namespace metaglyph::glyph {

struct OperatorInfo {
    Op op;
    std::string_view glyph; // UTF-8 encoding of the codepoint
    std::string_view name;
    bool core; // core six vs extended inventory
};

// All 13 operators, in inventory order.
const std::vector<OperatorInfo>& operator_table();

const OperatorInfo& operator_info(Op op);
std::string_view glyph_of(Op op);
std::string_view name_of(Op op);
std::optional<Op> op_from_glyph(std::string_view glyph);
std::optional<Op> op_from_name(std::string_view name);

// Operator occurrences of the canonical serialized form, counted by a
// tree walk. The anchor/constraint delimiter `|` is structural and is
// not counted; every other operator glyph of the canonical text is.
std::map<Op, int> operators_in(const Instruction& instr);
std::map<Op, int> operators_in(const ExprPtr& expr);

} // namespace metaglyph::glyph
