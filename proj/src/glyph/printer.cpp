#include "metaglyph/glyph/printer.hpp"

#include <sstream>

#include "metaglyph/glyph/operators.hpp"

namespace metaglyph::glyph {

namespace {

std::string g(Op op) { return std::string(glyph_of(op)); }

// Emission context decides whether a child needs grouping parentheses.
enum class Slot {
    Top,      // constraint top level / inside parens
    OrChild,  // operand of ∪
    AndChild, // operand of ∩
};

void emit_expr(const ExprPtr& expr, Slot slot, std::string& out);

void emit_group(const ExprPtr& expr, std::string& out) {
    out += "( ";
    emit_expr(expr, Slot::Top, out);
    out += " )";
}

std::string action_text(const ActionClause& action) {
    if (action.verb == "set" && action.args.size() == 1 && action.args[0].value) {
        return action.args[0].key + "=" + *action.args[0].value;
    }
    std::string out = action.verb;
    if (!action.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < action.args.size(); ++i) {
            if (i) out += ",";
            out += action.args[i].key;
            if (action.args[i].value) out += "=" + *action.args[i].value;
        }
        out += ")";
    }
    return out;
}

// Quantified, MapTo, Restrict and Compose span several tokens, so
// operator operands wrap them in grouping parens.
bool needs_group_in_operand(const ExprPtr& expr) {
    return std::holds_alternative<Quantified>(expr->node) ||
           std::holds_alternative<MapTo>(expr->node) ||
           std::holds_alternative<RestrictExpr>(expr->node) ||
           std::holds_alternative<ComposeChain>(expr->node);
}

void emit_expr(const ExprPtr& expr, Slot slot, std::string& out) {
    if (slot != Slot::Top && needs_group_in_operand(expr)) {
        emit_group(expr, out);
        return;
    }
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Anchor>) {
                out += node.name;
            } else if constexpr (std::is_same_v<T, Pred>) {
                out += g(node.op) + "(" + node.category + ")";
            } else if constexpr (std::is_same_v<T, Not>) {
                if (const auto* p = std::get_if<Pred>(&node.inner->node);
                    p && p->op == Op::MemberOf) {
                    out += g(Op::Negation) + "(" + p->category + ")";
                } else {
                    out += g(Op::Negation) + " ";
                    emit_group(node.inner, out);
                }
            } else if constexpr (std::is_same_v<T, And>) {
                if (slot == Slot::AndChild) {
                    emit_group(expr, out);
                    return;
                }
                for (std::size_t i = 0; i < node.conjuncts.size(); ++i) {
                    if (i) out += " " + g(Op::Intersect) + " ";
                    emit_expr(node.conjuncts[i], Slot::AndChild, out);
                }
            } else if constexpr (std::is_same_v<T, Or>) {
                if (slot != Slot::Top) {
                    emit_group(expr, out);
                    return;
                }
                for (std::size_t i = 0; i < node.disjuncts.size(); ++i) {
                    if (i) out += " " + g(Op::Union) + " ";
                    emit_expr(node.disjuncts[i], Slot::OrChild, out);
                }
            } else if constexpr (std::is_same_v<T, Implies>) {
                out += "( ";
                emit_expr(node.condition, Slot::Top, out);
                out += " " + g(Op::Implication) + " " + action_text(node.action) + " )";
            } else if constexpr (std::is_same_v<T, ComposeChain>) {
                for (std::size_t i = 0; i < node.steps.size(); ++i) {
                    if (i) out += " " + g(Op::Compose) + " ";
                    out += action_text(node.steps[i]);
                }
            } else if constexpr (std::is_same_v<T, Quantified>) {
                out += g(node.quantifier) + " " + node.variable + " " + g(Op::MemberOf) + "(" +
                       node.domain + ") ";
                emit_group(node.body, out);
            } else if constexpr (std::is_same_v<T, RestrictExpr>) {
                out += node.anchor.name + " " + g(Op::Restrict) + " ";
                // The slot after | holds an or_expr; a nested
                // restriction needs its own group to reparse.
                if (std::holds_alternative<RestrictExpr>(node.constraint->node)) {
                    emit_group(node.constraint, out);
                } else {
                    emit_expr(node.constraint, Slot::Top, out);
                }
            } else {
                static_assert(std::is_same_v<T, MapTo>);
                out += node.binding + " " + g(Op::MapsTo) + " " + action_text(node.action);
            }
        },
        expr->node);
}

void dump(const ExprPtr& expr, int depth, std::ostringstream& out);

void indent(int depth, std::ostringstream& out) {
    for (int i = 0; i < depth; ++i) out << "  ";
}

void dump_action(const ActionClause& action, int depth, std::ostringstream& out) {
    indent(depth, out);
    out << "action " << action_text(action) << "\n";
}

void dump(const ExprPtr& expr, int depth, std::ostringstream& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            indent(depth, out);
            if constexpr (std::is_same_v<T, Anchor>) {
                out << "anchor " << node.name << "\n";
            } else if constexpr (std::is_same_v<T, Pred>) {
                out << "pred " << name_of(node.op) << " " << node.category << "\n";
            } else if constexpr (std::is_same_v<T, Not>) {
                out << "not\n";
                dump(node.inner, depth + 1, out);
            } else if constexpr (std::is_same_v<T, And>) {
                out << "and\n";
                for (const auto& c : node.conjuncts) dump(c, depth + 1, out);
            } else if constexpr (std::is_same_v<T, Or>) {
                out << "or\n";
                for (const auto& d : node.disjuncts) dump(d, depth + 1, out);
            } else if constexpr (std::is_same_v<T, Implies>) {
                out << "implies\n";
                dump(node.condition, depth + 1, out);
                dump_action(node.action, depth + 1, out);
            } else if constexpr (std::is_same_v<T, ComposeChain>) {
                out << "compose\n";
                for (const auto& s : node.steps) dump_action(s, depth + 1, out);
            } else if constexpr (std::is_same_v<T, Quantified>) {
                out << "quantified " << name_of(node.quantifier) << " " << node.variable
                    << " in " << node.domain << "\n";
                dump(node.body, depth + 1, out);
            } else if constexpr (std::is_same_v<T, RestrictExpr>) {
                out << "restrict " << node.anchor.name << "\n";
                dump(node.constraint, depth + 1, out);
            } else {
                static_assert(std::is_same_v<T, MapTo>);
                out << "map_to " << node.binding << "\n";
                dump_action(node.action, depth + 1, out);
            }
        },
        expr->node);
}

} // namespace

std::string print_expr(const ExprPtr& expr) {
    std::string out;
    emit_expr(expr, Slot::Top, out);
    return out;
}

std::string print_action(const ActionClause& action) { return action_text(action); }

std::string print_task(const Task& task) {
    if (const auto* clause = std::get_if<ActionClause>(&task)) return action_text(*clause);
    const auto& steps = std::get<ComposeChain>(task).steps;
    std::string out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i) out += " " + g(Op::Compose) + " ";
        out += action_text(steps[i]);
    }
    return out;
}

std::string print_instruction(const Instruction& instr) {
    std::string out = instr.anchor.name;
    if (instr.constraint) {
        out += " " + g(Op::Restrict) + " ";
        if (std::holds_alternative<RestrictExpr>(instr.constraint->node)) {
            emit_group(instr.constraint, out);
        } else {
            emit_expr(instr.constraint, Slot::Top, out);
        }
    }
    out += " " + g(instr.arrow) + " " + print_task(instr.task);
    return out;
}

std::string dump_tree(const Instruction& instr) {
    std::ostringstream out;
    out << "instruction (" << name_of(instr.arrow) << ")\n";
    indent(1, out);
    out << "anchor " << instr.anchor.name << "\n";
    if (instr.constraint) {
        indent(1, out);
        out << "constraint\n";
        dump(instr.constraint, 2, out);
    }
    indent(1, out);
    out << "task\n";
    if (const auto* clause = std::get_if<ActionClause>(&instr.task)) {
        dump_action(*clause, 2, out);
    } else {
        for (const auto& s : std::get<ComposeChain>(instr.task).steps) dump_action(s, 2, out);
    }
    return out.str();
}

} // namespace metaglyph::glyph
