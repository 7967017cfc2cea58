#include "metaglyph/glyph/ast.hpp"

#include <algorithm>

namespace metaglyph::glyph {

ExprPtr make_expr(GlyphExpr e) { return std::make_shared<const GlyphExpr>(std::move(e)); }

ExprPtr make_not(ExprPtr inner) {
    if (const auto* n = std::get_if<Not>(&inner->node)) {
        return n->inner; // ¬(¬(x)) == x
    }
    return make_expr({Not{std::move(inner)}});
}

ExprPtr make_and(std::vector<ExprPtr> conjuncts) {
    if (conjuncts.size() == 1) return conjuncts.front();
    return make_expr({And{std::move(conjuncts)}});
}

ExprPtr make_or(std::vector<ExprPtr> disjuncts) {
    if (disjuncts.size() == 1) return disjuncts.front();
    return make_expr({Or{std::move(disjuncts)}});
}

ExprPtr make_implies(ExprPtr condition, ActionClause action) {
    return make_expr({Implies{std::move(condition), std::move(action)}});
}

ExprPtr make_quantified(Op quantifier, std::string variable, std::string domain, ExprPtr body) {
    return make_expr({Quantified{quantifier, std::move(variable), std::move(domain), std::move(body)}});
}

ExprPtr make_restrict(Anchor anchor, ExprPtr constraint) {
    return make_expr({RestrictExpr{std::move(anchor), std::move(constraint)}});
}

ExprPtr make_map_to(std::string binding, ActionClause action) {
    return make_expr({MapTo{std::move(binding), std::move(action)}});
}

Task make_task(std::vector<ActionClause> steps) {
    if (steps.size() == 1) return steps.front();
    return ComposeChain{std::move(steps)};
}

ActionClause make_assignment(std::string key, std::string value) {
    return ActionClause{"set", {Arg{std::move(key), std::move(value)}}};
}

namespace {

bool ptr_list_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](const ExprPtr& x, const ExprPtr& y) { return expr_equal(x, y); });
}

} // namespace

bool expr_equal(const GlyphExpr& a, const GlyphExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Anchor>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, Pred>) {
                return lhs.op == rhs.op && lhs.category == rhs.category;
            } else if constexpr (std::is_same_v<T, Not>) {
                return expr_equal(lhs.inner, rhs.inner);
            } else if constexpr (std::is_same_v<T, And>) {
                return ptr_list_equal(lhs.conjuncts, rhs.conjuncts);
            } else if constexpr (std::is_same_v<T, Or>) {
                return ptr_list_equal(lhs.disjuncts, rhs.disjuncts);
            } else if constexpr (std::is_same_v<T, Implies>) {
                return expr_equal(lhs.condition, rhs.condition) && lhs.action == rhs.action;
            } else if constexpr (std::is_same_v<T, ComposeChain>) {
                return lhs.steps == rhs.steps;
            } else if constexpr (std::is_same_v<T, Quantified>) {
                return lhs.quantifier == rhs.quantifier && lhs.variable == rhs.variable &&
                       lhs.domain == rhs.domain && expr_equal(lhs.body, rhs.body);
            } else if constexpr (std::is_same_v<T, RestrictExpr>) {
                return lhs.anchor.name == rhs.anchor.name &&
                       expr_equal(lhs.constraint, rhs.constraint);
            } else {
                static_assert(std::is_same_v<T, MapTo>);
                return lhs.binding == rhs.binding && lhs.action == rhs.action;
            }
        },
        a.node);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return expr_equal(*a, *b);
}

bool task_equal(const Task& a, const Task& b) {
    if (a.index() != b.index()) return false;
    if (const auto* clause = std::get_if<ActionClause>(&a)) {
        return *clause == std::get<ActionClause>(b);
    }
    return std::get<ComposeChain>(a).steps == std::get<ComposeChain>(b).steps;
}

bool instruction_equal(const Instruction& a, const Instruction& b) {
    return a.anchor.name == b.anchor.name && a.arrow == b.arrow &&
           expr_equal(a.constraint, b.constraint) && task_equal(a.task, b.task);
}

} // namespace metaglyph::glyph
