#include "metaglyph/glyph/operators.hpp"

#include <stdexcept>

namespace metaglyph::glyph {

const std::vector<OperatorInfo>& operator_table() {
    // U+2208 U+2209 U+00AC U+2229 U+222A U+2192 U+21D2 U+2218
    // U+2200 U+2203 U+2286 U+21A6 U+007C
    static const std::vector<OperatorInfo> table = {
        {Op::MemberOf, "∈", "member_of", true},
        {Op::NotMemberOf, "∉", "not_member_of", false},
        {Op::Negation, "¬", "negation", true},
        {Op::Intersect, "∩", "intersect", true},
        {Op::Union, "∪", "union", false},
        {Op::Arrow, "→", "arrow", true},
        {Op::Implication, "⇒", "implication", true},
        {Op::Compose, "∘", "compose", true},
        {Op::ForAll, "∀", "for_all", false},
        {Op::Exists, "∃", "exists", false},
        {Op::SubsetOf, "⊆", "subset_of", false},
        {Op::MapsTo, "↦", "maps_to", false},
        {Op::Restrict, "|", "restrict", false},
    };
    return table;
}

const OperatorInfo& operator_info(Op op) {
    for (const auto& info : operator_table()) {
        if (info.op == op) return info;
    }
    throw std::logic_error("unknown operator enum value");
}

std::string_view glyph_of(Op op) { return operator_info(op).glyph; }
std::string_view name_of(Op op) { return operator_info(op).name; }

std::optional<Op> op_from_glyph(std::string_view glyph) {
    for (const auto& info : operator_table()) {
        if (info.glyph == glyph) return info.op;
    }
    return std::nullopt;
}

std::optional<Op> op_from_name(std::string_view name) {
    for (const auto& info : operator_table()) {
        if (info.name == name) return info.op;
    }
    return std::nullopt;
}

namespace {

void count_expr(const ExprPtr& expr, std::map<Op, int>& counts);

void count_action(const ActionClause&, std::map<Op, int>&) {
    // Action clauses carry no operator glyphs.
}

void count_expr(const ExprPtr& expr, std::map<Op, int>& counts) {
    if (!expr) return;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Anchor>) {
                // no glyphs
            } else if constexpr (std::is_same_v<T, Pred>) {
                counts[node.op]++;
            } else if constexpr (std::is_same_v<T, Not>) {
                counts[Op::Negation]++;
                // ¬(C) prints the bare category, so the implicit
                // membership contributes no ∈ glyph.
                if (const auto* p = std::get_if<Pred>(&node.inner->node);
                    !p || p->op != Op::MemberOf) {
                    count_expr(node.inner, counts);
                }
            } else if constexpr (std::is_same_v<T, And>) {
                counts[Op::Intersect] += static_cast<int>(node.conjuncts.size()) - 1;
                for (const auto& c : node.conjuncts) count_expr(c, counts);
            } else if constexpr (std::is_same_v<T, Or>) {
                counts[Op::Union] += static_cast<int>(node.disjuncts.size()) - 1;
                for (const auto& d : node.disjuncts) count_expr(d, counts);
            } else if constexpr (std::is_same_v<T, Implies>) {
                counts[Op::Implication]++;
                count_expr(node.condition, counts);
                count_action(node.action, counts);
            } else if constexpr (std::is_same_v<T, ComposeChain>) {
                counts[Op::Compose] += static_cast<int>(node.steps.size()) - 1;
            } else if constexpr (std::is_same_v<T, Quantified>) {
                counts[node.quantifier]++;
                counts[Op::MemberOf]++; // the ∈(domain) token
                count_expr(node.body, counts);
            } else if constexpr (std::is_same_v<T, RestrictExpr>) {
                // Scope delimitation is structural, not semantic; the
                // `|` glyph is excluded from fidelity denominators.
                count_expr(node.constraint, counts);
            } else {
                static_assert(std::is_same_v<T, MapTo>);
                counts[Op::MapsTo]++;
                count_action(node.action, counts);
            }
        },
        expr->node);
}

} // namespace

std::map<Op, int> operators_in(const ExprPtr& expr) {
    std::map<Op, int> counts;
    count_expr(expr, counts);
    return counts;
}

std::map<Op, int> operators_in(const Instruction& instr) {
    std::map<Op, int> counts;
    count_expr(instr.constraint, counts);
    counts[instr.arrow]++;
    if (const auto* chain = std::get_if<ComposeChain>(&instr.task)) {
        counts[Op::Compose] += static_cast<int>(chain->steps.size()) - 1;
    }
    return counts;
}

} // namespace metaglyph::glyph
