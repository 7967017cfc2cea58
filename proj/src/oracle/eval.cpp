#include "metaglyph/oracle/eval.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <variant>
#include <vector>

#include "metaglyph/errors.hpp"
#include "metaglyph/glyph/operators.hpp"

namespace metaglyph::oracle {

namespace {

using forge::Item;
using forge::TaskFamily;
using forge::TaskInstance;
using glyph::ActionClause;
using glyph::ExprPtr;
using glyph::Implies;
using glyph::Op;

bool has_category(const Item& item, const std::string& category) {
    return std::find(item.categories.begin(), item.categories.end(), category) !=
           item.categories.end();
}

[[noreturn]] void reject_operator(Op op) {
    throw UnsupportedOperator(std::string(glyph_of(op)) + " (" + std::string(name_of(op)) +
                              ") has no evaluation semantics");
}

std::string lowercase_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Working row for transformation: the source item plus its attribute
// snapshot. Categories stay visible for filter steps; the serialized
// record drops them.
struct Record {
    const Item* source;
    std::string name;
    std::map<std::string, std::string> attributes;
};

// Rule from a transformation constraint: (condition ⇒ key=value).
struct Rule {
    ExprPtr condition;
    std::string key;
    std::string value;
};

Rule rule_from(const Implies& node) {
    const ActionClause& action = node.action;
    if (action.verb != "set" || action.args.size() != 1 || !action.args[0].value) {
        throw DomainError("rule consequent must be a single assignment");
    }
    if (action.args[0].key == "name") {
        throw DomainError("rules may not assign the reserved name field");
    }
    return Rule{node.condition, action.args[0].key, *action.args[0].value};
}

// Transformation constraints are a rule or a conjunction of rules.
std::vector<Rule> collect_rules(const ExprPtr& constraint) {
    std::vector<Rule> rules;
    if (!constraint) return rules;
    if (const auto* one = std::get_if<Implies>(&constraint->node)) {
        rules.push_back(rule_from(*one));
        return rules;
    }
    if (const auto* all = std::get_if<glyph::And>(&constraint->node)) {
        for (const auto& conjunct : all->conjuncts) {
            const auto* rule = std::get_if<Implies>(&conjunct->node);
            if (!rule) throw DomainError("transformation constraint mixes rules with predicates");
            rules.push_back(rule_from(*rule));
        }
        return rules;
    }
    throw DomainError("transformation constraint must be built from rules");
}

std::string single_arg(const ActionClause& step) {
    if (step.args.size() != 1 || step.args[0].value) {
        throw DomainError(step.verb + " takes exactly one bare argument");
    }
    return step.args[0].key;
}

void apply_step(const ActionClause& step, std::vector<Record>& records) {
    if (step.verb == "lowercase") {
        const std::string field = single_arg(step);
        for (Record& r : records) {
            if (field == "name") {
                r.name = lowercase_ascii(r.name);
            } else if (auto it = r.attributes.find(field); it != r.attributes.end()) {
                it->second = lowercase_ascii(it->second);
            }
        }
    } else if (step.verb == "sort") {
        const std::string key = single_arg(step);
        auto key_of = [&key](const Record& r) -> const std::string& {
            static const std::string kEmpty;
            if (key == "name") return r.name;
            auto it = r.attributes.find(key);
            return it == r.attributes.end() ? kEmpty : it->second;
        };
        std::stable_sort(records.begin(), records.end(),
                         [&](const Record& a, const Record& b) { return key_of(a) < key_of(b); });
    } else if (step.verb == "filter") {
        const std::string category = single_arg(step);
        std::erase_if(records,
                      [&](const Record& r) { return !has_category(*r.source, category); });
    } else {
        throw UnknownVerb("unknown transformation step: " + step.verb);
    }
}

std::vector<const ActionClause*> task_steps(const glyph::Task& task) {
    std::vector<const ActionClause*> steps;
    if (const auto* single = std::get_if<ActionClause>(&task)) {
        steps.push_back(single);
    } else {
        for (const auto& step : std::get<glyph::ComposeChain>(task).steps) steps.push_back(&step);
    }
    return steps;
}

// Selection and composition share the verb and the output shape.
util::Json eval_filter_task(const TaskInstance& instance) {
    const auto* clause = std::get_if<ActionClause>(&instance.instruction.task);
    if (!clause || clause->verb != "select" || !clause->args.empty()) {
        throw UnknownVerb("selection task must be the bare verb select");
    }
    util::Json names = util::Json::array();
    for (const Item& item : instance.universe.items) {
        if (!instance.instruction.constraint ||
            eval_constraint(instance.instruction.constraint, item)) {
            names.push_back(item.name);
        }
    }
    return names;
}

// Requested categories in constraint order: ∈(cat) or a conjunction of them.
std::vector<std::string> requested_categories(const ExprPtr& constraint) {
    std::vector<std::string> cats;
    if (!constraint) throw DomainError("extraction requires a category constraint");
    auto take = [&cats](const ExprPtr& e) {
        const auto* pred = std::get_if<glyph::Pred>(&e->node);
        if (!pred || pred->op != Op::MemberOf) {
            throw DomainError("extraction constraint must request categories with ∈");
        }
        cats.push_back(pred->category);
    };
    if (const auto* all = std::get_if<glyph::And>(&constraint->node)) {
        for (const auto& conjunct : all->conjuncts) take(conjunct);
    } else {
        take(constraint);
    }
    return cats;
}

util::Json eval_extraction(const TaskInstance& instance) {
    const auto* clause = std::get_if<ActionClause>(&instance.instruction.task);
    if (!clause || clause->verb != "extract" || !clause->args.empty()) {
        throw UnknownVerb("extraction task must be the bare verb extract");
    }
    util::Json out = util::Json::object();
    for (const std::string& cat : requested_categories(instance.instruction.constraint)) {
        out[cat] = util::Json::array();
    }
    for (const auto& [sentence, category] : instance.sentences) {
        if (auto it = out.find(category); it != out.end()) it->push_back(sentence);
    }
    return out;
}

util::Json eval_transformation(const TaskInstance& instance) {
    const std::vector<Rule> rules = collect_rules(instance.instruction.constraint);

    std::vector<Record> records;
    records.reserve(instance.universe.items.size());
    for (const Item& item : instance.universe.items) {
        records.push_back(Record{&item, item.name, item.attributes});
    }
    // Rules fire cumulatively in source order; a later rule on the same
    // key overwrites (last-wins).
    for (const Rule& rule : rules) {
        for (Record& r : records) {
            if (eval_constraint(rule.condition, *r.source)) r.attributes[rule.key] = rule.value;
        }
    }
    for (const ActionClause* step : task_steps(instance.instruction.task)) {
        apply_step(*step, records);
    }

    util::Json out = util::Json::array();
    for (const Record& r : records) {
        util::Json row = util::Json::object();
        row["name"] = r.name;
        for (const auto& [key, value] : r.attributes) row[key] = value;
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace

bool eval_constraint(const ExprPtr& expr, const Item& item) {
    if (!expr) throw DomainError("null constraint");
    return std::visit(
        [&](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, glyph::Pred>) {
                switch (node.op) {
                    case Op::MemberOf:
                        return has_category(item, node.category);
                    case Op::NotMemberOf:
                        return !has_category(item, node.category);
                    default:
                        reject_operator(node.op);
                }
            } else if constexpr (std::is_same_v<T, glyph::Not>) {
                return !eval_constraint(node.inner, item);
            } else if constexpr (std::is_same_v<T, glyph::And>) {
                return std::all_of(node.conjuncts.begin(), node.conjuncts.end(),
                                   [&](const ExprPtr& c) { return eval_constraint(c, item); });
            } else if constexpr (std::is_same_v<T, glyph::Or>) {
                return std::any_of(node.disjuncts.begin(), node.disjuncts.end(),
                                   [&](const ExprPtr& d) { return eval_constraint(d, item); });
            } else if constexpr (std::is_same_v<T, glyph::Quantified>) {
                reject_operator(node.quantifier);
            } else if constexpr (std::is_same_v<T, glyph::MapTo>) {
                reject_operator(Op::MapsTo);
            } else {
                throw DomainError("constraint node outside predicate logic");
            }
        },
        expr->node);
}

util::Json eval_task(const TaskInstance& instance) {
    switch (instance.family) {
        case TaskFamily::Selection:
        case TaskFamily::ConstraintComposition:
            return eval_filter_task(instance);
        case TaskFamily::Extraction:
            return eval_extraction(instance);
        case TaskFamily::ConditionalTransformation:
            return eval_transformation(instance);
    }
    throw DomainError("unknown task family");
}

void fill_gold(TaskInstance& instance) { instance.gold = eval_task(instance); }

} // namespace metaglyph::oracle
