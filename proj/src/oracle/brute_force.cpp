#include "metaglyph/oracle/brute_force.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "metaglyph/errors.hpp"
#include "metaglyph/glyph/printer.hpp"

// Deliberately self-contained: this file re-derives every answer from the
// printed instruction text with its own whitespace tokenizer and evaluator.
// It must not call the glyph parser or eval_constraint.

namespace metaglyph::oracle {

namespace {

using forge::Item;
using forge::TaskFamily;
using forge::TaskInstance;

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) i++;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) i++;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// "∈(mammal)" with prefix "∈(" → "mammal".
std::string category_of(const std::string& token, const std::string& prefix) {
    if (!ends_with(token, ")") || token.size() <= prefix.size()) {
        throw DomainError("brute force: malformed predicate token " + token);
    }
    return token.substr(prefix.size(), token.size() - prefix.size() - 1);
}

bool has(const std::vector<std::string>& categories, const std::string& category) {
    return std::find(categories.begin(), categories.end(), category) != categories.end();
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Evaluates one constraint token range against one item's categories by
// recursive descent, re-reading the tokens on every call.
struct TextEval {
    const std::vector<std::string>& tokens;
    std::size_t pos;
    std::size_t end;
    const std::vector<std::string>& categories;

    const std::string& next() {
        if (pos >= end) throw DomainError("brute force: constraint ended early");
        return tokens[pos++];
    }

    void expect(const std::string& token) {
        if (next() != token) throw DomainError("brute force: expected " + token);
    }

    bool or_level() {
        bool value = and_level();
        while (pos < end && tokens[pos] == "∪") {
            pos++;
            bool rhs = and_level(); // consume before combining
            value = value || rhs;
        }
        return value;
    }

    bool and_level() {
        bool value = unary();
        while (pos < end && tokens[pos] == "∩") {
            pos++;
            bool rhs = unary();
            value = value && rhs;
        }
        return value;
    }

    bool unary() {
        const std::string& token = next();
        if (token == "¬") {
            expect("(");
            bool inner = or_level();
            expect(")");
            return !inner;
        }
        if (token == "(") {
            bool inner = or_level();
            expect(")");
            return inner;
        }
        if (starts_with(token, "¬(")) return !has(categories, category_of(token, "¬("));
        if (starts_with(token, "∈(")) return has(categories, category_of(token, "∈("));
        if (starts_with(token, "∉(")) return !has(categories, category_of(token, "∉("));
        if (starts_with(token, "⊆(") || token == "∀" || token == "∃" ||
            token.find("↦") != std::string::npos) {
            throw UnsupportedOperator("brute force rejects extended operator in " + token);
        }
        throw DomainError("brute force: unreadable constraint token " + token);
    }
};

bool eval_text_constraint(const std::vector<std::string>& tokens, std::size_t begin,
                          std::size_t end, const std::vector<std::string>& categories) {
    TextEval eval{tokens, begin, end, categories};
    bool value = eval.or_level();
    if (eval.pos != end) throw DomainError("brute force: trailing constraint tokens");
    return value;
}

struct InstructionText {
    std::vector<std::string> tokens;
    std::size_t constraint_begin = 0; // == constraint_end when absent
    std::size_t constraint_end = 0;
    std::size_t task_begin = 0;
};

InstructionText split_instruction(const std::string& text) {
    InstructionText parts;
    parts.tokens = split_ws(text);
    const auto& tokens = parts.tokens;
    if (tokens.size() < 3) throw DomainError("brute force: instruction too short");

    std::size_t arrow = 1;
    if (tokens[1] == "|") {
        parts.constraint_begin = 2;
        int depth = 0;
        arrow = 0;
        for (std::size_t i = 2; i < tokens.size(); i++) {
            if (tokens[i] == "(") depth++;
            else if (tokens[i] == ")") depth--;
            else if (depth == 0 && (tokens[i] == "⇒" || tokens[i] == "→")) {
                arrow = i;
                break;
            }
        }
        if (arrow == 0) throw DomainError("brute force: no top-level arrow");
        parts.constraint_end = arrow;
    } else {
        if (tokens[1] != "⇒" && tokens[1] != "→") {
            throw DomainError("brute force: expected | or arrow after anchor");
        }
        parts.constraint_begin = parts.constraint_end = 1;
    }
    parts.task_begin = arrow + 1;
    if (parts.task_begin >= tokens.size()) throw DomainError("brute force: missing task");
    return parts;
}

struct TextRule {
    std::string category;
    bool negated = false;
    std::string key;
    std::string value;
};

// Rule groups print as "( ∈(cat) ⇒ key=value )" joined by "∩".
std::vector<TextRule> parse_text_rules(const std::vector<std::string>& tokens, std::size_t begin,
                                       std::size_t end) {
    std::vector<TextRule> rules;
    std::size_t i = begin;
    while (i < end) {
        if (tokens[i] != "(" || i + 4 >= end) {
            throw DomainError("brute force: malformed rule group");
        }
        TextRule rule;
        const std::string& cond = tokens[i + 1];
        if (starts_with(cond, "∈(")) {
            rule.category = category_of(cond, "∈(");
        } else if (starts_with(cond, "∉(")) {
            rule.category = category_of(cond, "∉(");
            rule.negated = true;
        } else if (starts_with(cond, "¬(")) {
            rule.category = category_of(cond, "¬(");
            rule.negated = true;
        } else {
            throw DomainError("brute force: rule condition must be a single predicate");
        }
        if (tokens[i + 2] != "⇒") throw DomainError("brute force: rule group missing ⇒");
        const std::string& assignment = tokens[i + 3];
        std::size_t eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size()) {
            throw DomainError("brute force: rule consequent must be key=value");
        }
        rule.key = assignment.substr(0, eq);
        rule.value = assignment.substr(eq + 1);
        if (tokens[i + 4] != ")") throw DomainError("brute force: unclosed rule group");
        rules.push_back(std::move(rule));
        i += 5;
        if (i < end) {
            if (tokens[i] != "∩") throw DomainError("brute force: rules must be ∩-joined");
            i++;
        }
    }
    return rules;
}

// "lowercase(name)" → {"lowercase", "name"}.
std::pair<std::string, std::string> parse_step(const std::string& token) {
    std::size_t open = token.find('(');
    if (open == std::string::npos || !ends_with(token, ")") || open + 2 > token.size() - 1) {
        throw DomainError("brute force: unreadable step " + token);
    }
    return {token.substr(0, open), token.substr(open + 1, token.size() - open - 2)};
}

util::Json brute_selection(const TaskInstance& inst, const InstructionText& parts) {
    if (parts.task_begin + 1 != parts.tokens.size() || parts.tokens[parts.task_begin] != "select") {
        throw UnknownVerb("brute force: selection task must be select");
    }
    util::Json names = util::Json::array();
    for (const Item& item : inst.universe.items) {
        bool keep = parts.constraint_begin == parts.constraint_end ||
                    eval_text_constraint(parts.tokens, parts.constraint_begin,
                                         parts.constraint_end, item.categories);
        if (keep) names.push_back(item.name);
    }
    return names;
}

util::Json brute_extraction(const TaskInstance& inst, const InstructionText& parts) {
    if (parts.task_begin + 1 != parts.tokens.size() ||
        parts.tokens[parts.task_begin] != "extract") {
        throw UnknownVerb("brute force: extraction task must be extract");
    }
    util::Json out = util::Json::object();
    for (std::size_t i = parts.constraint_begin; i < parts.constraint_end; i++) {
        const std::string& token = parts.tokens[i];
        if (token == "∩") continue;
        out[category_of(token, "∈(")] = util::Json::array();
    }
    for (const auto& [sentence, category] : inst.sentences) {
        if (auto it = out.find(category); it != out.end()) it->push_back(sentence);
    }
    return out;
}

util::Json brute_transformation(const TaskInstance& inst, const InstructionText& parts) {
    const std::vector<TextRule> rules =
        parse_text_rules(parts.tokens, parts.constraint_begin, parts.constraint_end);

    struct Row {
        const Item* source;
        std::string name;
        std::map<std::string, std::string> attributes;
    };
    std::vector<Row> rows;
    for (const Item& item : inst.universe.items) {
        rows.push_back(Row{&item, item.name, item.attributes});
    }
    for (const TextRule& rule : rules) {
        for (Row& row : rows) {
            if (has(row.source->categories, rule.category) != rule.negated) {
                row.attributes[rule.key] = rule.value;
            }
        }
    }

    for (std::size_t i = parts.task_begin; i < parts.tokens.size(); i++) {
        if (parts.tokens[i] == "∘") continue;
        auto [verb, arg] = parse_step(parts.tokens[i]);
        if (verb == "lowercase") {
            for (Row& row : rows) {
                if (arg == "name") {
                    row.name = lower(row.name);
                } else if (auto it = row.attributes.find(arg); it != row.attributes.end()) {
                    it->second = lower(it->second);
                }
            }
        } else if (verb == "sort") {
            auto key_of = [&arg](const Row& row) -> const std::string& {
                static const std::string kEmpty;
                if (arg == "name") return row.name;
                auto it = row.attributes.find(arg);
                return it == row.attributes.end() ? kEmpty : it->second;
            };
            std::stable_sort(rows.begin(), rows.end(),
                             [&](const Row& a, const Row& b) { return key_of(a) < key_of(b); });
        } else if (verb == "filter") {
            std::erase_if(rows, [&](const Row& row) { return !has(row.source->categories, arg); });
        } else {
            throw UnknownVerb("brute force: unknown step verb " + verb);
        }
    }

    util::Json out = util::Json::array();
    for (const Row& row : rows) {
        util::Json record = util::Json::object();
        record["name"] = row.name;
        for (const auto& [key, value] : row.attributes) record[key] = value;
        out.push_back(std::move(record));
    }
    return out;
}

} // namespace

util::Json brute_force(const TaskInstance& instance) {
    if (instance.universe.items.size() > kBruteForceItemLimit) {
        throw SizeLimit("brute force handles at most " +
                        std::to_string(kBruteForceItemLimit) + " items, got " +
                        std::to_string(instance.universe.items.size()));
    }
    const InstructionText parts = split_instruction(glyph::print_instruction(instance.instruction));
    switch (instance.family) {
        case TaskFamily::Selection:
        case TaskFamily::ConstraintComposition:
            return brute_selection(instance, parts);
        case TaskFamily::Extraction:
            return brute_extraction(instance, parts);
        case TaskFamily::ConditionalTransformation:
            return brute_transformation(instance, parts);
    }
    throw DomainError("brute force: unknown task family");
}

} // namespace metaglyph::oracle
