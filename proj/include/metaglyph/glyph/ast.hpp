#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace metaglyph::glyph {

// The 13 instruction operators. Core ops carry oracle semantics; the
// rest parse and print but are rejected by evaluation.
enum class Op {
    MemberOf,     // ∈
    NotMemberOf,  // ∉
    Negation,     // ¬
    Intersect,    // ∩
    Union,        // ∪
    Arrow,        // →
    Implication,  // ⇒
    Compose,      // ∘
    ForAll,       // ∀
    Exists,       // ∃
    SubsetOf,     // ⊆
    MapsTo,       // ↦
    Restrict,     // |
};

inline constexpr int kOperatorCount = 13;

struct GlyphExpr;
using ExprPtr = std::shared_ptr<const GlyphExpr>;

struct Anchor {
    std::string name;
};

// Category predicate: ∈(mammal), ∉(bird), ⊆(team_a).
struct Pred {
    Op op;
    std::string category;
};

struct Not {
    ExprPtr inner;
};

struct And {
    std::vector<ExprPtr> conjuncts; // >= 2 after parsing
};

struct Or {
    std::vector<ExprPtr> disjuncts; // >= 2 after parsing
};

// One argument of an action clause: bare key ("name") or key=value
// ("access=full"). Keys are unique within a clause.
struct Arg {
    std::string key;
    std::optional<std::string> value;

    bool operator==(const Arg&) const = default;
};

// Task verb plus arguments. The pseudo-verb "set" with a single
// key=value argument prints in the bare assignment form "key=value".
struct ActionClause {
    std::string verb;
    std::vector<Arg> args;

    bool operator==(const ActionClause&) const = default;
};

// Rule: condition ⇒ consequent assignment. Always parenthesized in
// serialized form so the instruction-level ⇒ stays unambiguous.
struct Implies {
    ExprPtr condition;
    ActionClause action;
};

struct ComposeChain {
    std::vector<ActionClause> steps; // >= 2; a single step is a plain ActionClause
};

// ∀ x ∈(S) ( body ) / ∃ x ∈(S) ( body ). Parse/print only.
struct Quantified {
    Op quantifier; // ForAll or Exists
    std::string variable;
    std::string domain;
    ExprPtr body;
};

// anchor | constraint as an expression node.
struct RestrictExpr {
    Anchor anchor;
    ExprPtr constraint;
};

// x ↦ action. Parse/print only.
struct MapTo {
    std::string binding;
    ActionClause action;
};

struct GlyphExpr {
    std::variant<Anchor, Pred, Not, And, Or, Implies, ComposeChain, Quantified,
                 RestrictExpr, MapTo>
        node;
};

using Task = std::variant<ActionClause, ComposeChain>;

// anchor, optional constraint, task. `arrow` is ⇒ in canonical corpora;
// → is accepted as a surface variant and round-trips.
struct Instruction {
    Anchor anchor;
    ExprPtr constraint; // null when absent
    Task task;
    Op arrow = Op::Implication; // Implication or Arrow
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool expr_equal(const GlyphExpr& a, const GlyphExpr& b);
bool task_equal(const Task& a, const Task& b);
bool instruction_equal(const Instruction& a, const Instruction& b);

ExprPtr make_expr(GlyphExpr e);

inline ExprPtr make_anchor(std::string name) { return make_expr({Anchor{std::move(name)}}); }
inline ExprPtr make_pred(Op op, std::string category) {
    return make_expr({Pred{op, std::move(category)}});
}

// Normalizes double negation away: not(not(x)) == x.
ExprPtr make_not(ExprPtr inner);

// Single-element lists collapse to the element itself so that the
// canonical form reparses to the same tree.
ExprPtr make_and(std::vector<ExprPtr> conjuncts);
ExprPtr make_or(std::vector<ExprPtr> disjuncts);

ExprPtr make_implies(ExprPtr condition, ActionClause action);
ExprPtr make_quantified(Op quantifier, std::string variable, std::string domain, ExprPtr body);
ExprPtr make_restrict(Anchor anchor, ExprPtr constraint);
ExprPtr make_map_to(std::string binding, ActionClause action);

// Task helper: one step stays an ActionClause, two or more become a chain.
Task make_task(std::vector<ActionClause> steps);

ActionClause make_assignment(std::string key, std::string value);

} // namespace metaglyph::glyph
