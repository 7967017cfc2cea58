#include "metaglyph/forge/render.hpp"

#include <cctype>
#include <map>

#include "metaglyph/errors.hpp"
#include "metaglyph/forge/tokenizer.hpp"
#include "metaglyph/glyph/control.hpp"
#include "metaglyph/glyph/printer.hpp"

namespace metaglyph::forge {

using namespace metaglyph::glyph;

std::string nl_label(const std::string& label) {
    static const std::map<std::string, std::string> table = {
        {"mammal", "mammals"},       {"bird", "birds"},
        {"pet", "pets"},             {"reptile", "reptiles"},
        {"predator", "predators"},   {"employee", "employees"},
        {"admin", "admins"},         {"contractor", "contractors"},
        {"manager", "managers"},     {"guest", "guests"},
    };
    const auto it = table.find(label);
    return it != table.end() ? it->second : label;
}

namespace {

std::string item_json(const Item& item) {
    std::string out = "{\"name\":\"" + item.name + "\",\"categories\":[";
    for (std::size_t i = 0; i < item.categories.size(); ++i) {
        if (i) out += ",";
        out += "\"" + item.categories[i] + "\"";
    }
    out += "]";
    if (!item.attributes.empty()) {
        out += ",\"attributes\":{";
        bool first = true;
        for (const auto& [key, value] : item.attributes) {
            if (!first) out += ",";
            first = false;
            out += "\"" + key + "\":\"" + value + "\"";
        }
        out += "}";
    }
    out += "}";
    return out;
}

// "belongs to the category of X" / "must not be in the category of X",
// conjuncts joined by "and, in addition, the item".
std::string membership_prose(const ExprPtr& constraint) {
    std::vector<std::string> clauses;
    const auto add_clause = [&](const ExprPtr& expr) {
        if (const auto* pred = std::get_if<Pred>(&expr->node)) {
            clauses.push_back("belongs to the category of " + nl_label(pred->category));
            return;
        }
        if (const auto* negated = std::get_if<Not>(&expr->node)) {
            if (const auto* pred = std::get_if<Pred>(&negated->inner->node)) {
                clauses.push_back("must not be in the category of " +
                                  nl_label(pred->category));
                return;
            }
        }
        throw DomainError("membership prose expects ∈ / ¬ conjuncts");
    };
    if (const auto* conj = std::get_if<And>(&constraint->node)) {
        for (const auto& part : conj->conjuncts) add_clause(part);
    } else {
        add_clause(constraint);
    }
    std::string out;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (i) out += " and, in addition, the item ";
        out += clauses[i];
    }
    return out;
}

std::string extraction_prose(const ExprPtr& constraint) {
    std::vector<std::string> categories;
    const auto add = [&](const ExprPtr& expr) {
        const auto* pred = std::get_if<Pred>(&expr->node);
        if (!pred) throw DomainError("extraction constraint expects ∈ conjuncts");
        categories.push_back(pred->category);
    };
    if (const auto* conj = std::get_if<And>(&constraint->node)) {
        for (const auto& part : conj->conjuncts) add(part);
    } else {
        add(constraint);
    }
    std::string out;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        if (i) out += " and, in addition, ";
        out += "every sentence that belongs to the category of " + nl_label(categories[i]);
    }
    return out;
}

// "if … then …" rule sentences from the Implies conjuncts.
std::string rules_prose(const ExprPtr& constraint) {
    std::vector<const Implies*> rules;
    const auto add = [&](const ExprPtr& expr) {
        if (const auto* rule = std::get_if<Implies>(&expr->node)) rules.push_back(rule);
    };
    if (const auto* conj = std::get_if<And>(&constraint->node)) {
        for (const auto& part : conj->conjuncts) add(part);
    } else {
        add(constraint);
    }
    std::string out;
    for (const auto* rule : rules) {
        const auto* pred = std::get_if<Pred>(&rule->condition->node);
        if (!pred) throw DomainError("rule condition expects a ∈ predicate");
        if (rule->action.verb != "set" || rule->action.args.size() != 1 ||
            !rule->action.args[0].value) {
            throw DomainError("rule action expects a single assignment");
        }
        if (!out.empty()) out += " ";
        out += "If the item belongs to the category of " + nl_label(pred->category) +
               ", then set its " + rule->action.args[0].key + " attribute to " +
               *rule->action.args[0].value + ".";
    }
    return out;
}

std::string step_phrase(const ActionClause& step) {
    if (step.verb == "lowercase" && step.args.size() == 1) {
        return "lowercase the value stored in the " + step.args[0].key +
               " field of every item";
    }
    if (step.verb == "sort" && step.args.size() == 1) {
        return "sort the items by the value of their " + step.args[0].key + " field";
    }
    return print_action(step);
}

// "first … ; after that, …" over the compose chain.
std::string steps_prose(const Task& task) {
    std::vector<ActionClause> steps;
    if (const auto* clause = std::get_if<ActionClause>(&task)) {
        steps.push_back(*clause);
    } else {
        steps = std::get<ComposeChain>(task).steps;
    }
    if (steps.size() == 1) {
        std::string phrase = step_phrase(steps[0]);
        phrase[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(phrase[0])));
        return phrase + ".";
    }
    std::string out = "First, " + step_phrase(steps[0]);
    for (std::size_t i = 1; i < steps.size(); ++i) {
        out += "; after that, " + step_phrase(steps[i]);
    }
    return out + ".";
}

} // namespace

std::string data_block(const TaskInstance& instance) {
    if (instance.family == TaskFamily::Extraction) {
        return instance.instruction.anchor.name + " = " + instance.source_text;
    }
    std::string out = instance.instruction.anchor.name + " = [";
    for (std::size_t i = 0; i < instance.universe.items.size(); ++i) {
        if (i) out += ", ";
        out += item_json(instance.universe.items[i]);
    }
    out += "]";
    return out;
}

std::string format_sentence(TaskFamily family) {
    switch (family) {
        case TaskFamily::Selection:
            return "Respond only with JSON: one array holding the names of the "
                   "selected items in input order.";
        case TaskFamily::ConstraintComposition:
            return "Respond only with JSON: one array holding the names of the items "
                   "that satisfy every constraint, keeping the original input order.";
        case TaskFamily::Extraction:
            return "Respond only with JSON: one object mapping each requested "
                   "category to its sentences.";
        case TaskFamily::ConditionalTransformation:
            return "Respond only with JSON: one array holding one object per item, "
                   "each object carrying the item name in its final form together "
                   "with every attribute value that the rules assigned.";
    }
    throw ConfigError("unknown task family");
}

std::string render_mg(const TaskInstance& instance) {
    return print_instruction(instance.instruction) + "\n" + data_block(instance) + "\n" +
           format_sentence(instance.family);
}

std::string render_nl(const TaskInstance& instance) {
    const auto& constraint = instance.instruction.constraint;
    std::string prose;
    switch (instance.family) {
        case TaskFamily::Selection:
            prose =
                "Below you will find a list of items, and this paragraph explains "
                "exactly how to decide which of those items belong in your answer. "
                "Every item in the list carries a name together with the categories "
                "that apply to it, and those categories are the only information you "
                "may use while making your decisions. Work through the items one at "
                "a time, in the order in which they appear, and test each item "
                "against every condition stated here.";
            if (constraint) {
                prose += " An item qualifies only when the item " +
                         membership_prose(constraint) + ".";
            }
            prose +=
                " An item that misses even one of these conditions must be left out "
                "of the answer entirely, however many of the remaining conditions it "
                "manages to meet. When every item has been tested, gather the names "
                "of all the qualifying items, keep them in the order in which the "
                "items appeared in the list, and return that collection of names as "
                "your answer.";
            break;
        case TaskFamily::ConstraintComposition:
            prose =
                "The items below each carry a name and a set of categories. Apply "
                "all of the following constraints together as one combined filter";
            if (constraint) {
                prose += ", keeping an item only when the item " +
                         membership_prose(constraint);
            }
            prose +=
                ". Every constraint must hold at the same time for an item to pass. "
                "Return the names of the items that pass, in their original order.";
            break;
        case TaskFamily::Extraction:
            prose =
                "A short technical report appears below, written as a sequence of "
                "sentences. Your job is to read the report and pull out the "
                "sentences that discuss the requested risk areas, organizing what "
                "you extract by area.";
            if (constraint) {
                prose += " Specifically, collect " + extraction_prose(constraint) + ".";
            }
            prose +=
                " Keep each extracted sentence exactly as it appears in the report, "
                "without rewording anything, and preserve the order in which the "
                "sentences occur. Sentences that do not discuss any requested area "
                "must not appear anywhere in your answer, no matter how relevant "
                "they might seem for some other reason. If several sentences fall "
                "under the same area, include all of them under that area.";
            break;
        case TaskFamily::ConditionalTransformation:
            prose =
                "The items below each have a name and a list of categories. "
                "Transform every item according to the rules in this paragraph.";
            if (constraint) prose += " " + rules_prose(constraint);
            prose +=
                " A rule changes only the items whose categories satisfy its "
                "condition; all other items keep their attributes unchanged. After "
                "every rule has been applied, carry out the following steps on the "
                "whole list. " +
                steps_prose(instance.instruction.task) +
                " Return every item, transformed accordingly.";
            break;
    }
    return prose + "\n" + data_block(instance) + "\n" + format_sentence(instance.family);
}

PromptTriplet compile_triplet(const TaskInstance& instance) {
    PromptTriplet triplet;
    triplet.nl = render_nl(instance);
    triplet.mg = render_mg(instance);
    triplet.ctrl = to_control(triplet.mg);
    triplet.nl_tokens = tokenize(triplet.nl);
    triplet.mg_tokens = tokenize(triplet.mg);
    triplet.ctrl_tokens = tokenize(triplet.ctrl);
    if (triplet.ctrl_tokens != triplet.mg_tokens) {
        throw TokenMismatch("ctrl prompt token count " +
                            std::to_string(triplet.ctrl_tokens) + " != mg " +
                            std::to_string(triplet.mg_tokens) + " for " + instance.id);
    }
    return triplet;
}

double compression_ratio(int nl_tokens, int mg_tokens) {
    if (nl_tokens <= 0) throw DomainError("nl_tokens must be positive");
    if (mg_tokens > nl_tokens) throw DomainError("mg_tokens exceeds nl_tokens");
    return 1.0 - static_cast<double>(mg_tokens) / static_cast<double>(nl_tokens);
}

} // namespace metaglyph::forge
