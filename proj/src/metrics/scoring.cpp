#include "metaglyph/metrics/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "metaglyph/glyph/operators.hpp"
#include "metaglyph/metrics/normalize.hpp"
#include "metaglyph/oracle/eval.hpp"

namespace metaglyph::metrics {

namespace {

using forge::Item;
using forge::TaskFamily;
using forge::TaskInstance;
using gateway::TrialRecord;
using gateway::TrialStatus;
using glyph::ExprPtr;
using glyph::Op;

struct Indexes {
    std::unordered_map<std::string, const TaskInstance*> instances;
    std::unordered_map<std::string, const TrialRecord*> trials; // by dedup key
    std::set<std::string> models;

    explicit Indexes(const ScoreInput& input) {
        for (const auto& instance : input.corpus) instances[instance.id] = &instance;
        for (const auto& trial : input.trials) {
            trials[gateway::trial_key(trial.instance_id, trial.model, trial.variant)] = &trial;
            models.insert(trial.model);
        }
    }

    const TrialRecord* find(const std::string& instance_id, const std::string& model,
                            const std::string& variant) const {
        auto it = trials.find(gateway::trial_key(instance_id, model, variant));
        return it == trials.end() ? nullptr : it->second;
    }
};

const util::Json& gold_of(const ScoreInput& input, const TaskInstance& instance) {
    auto it = input.gold.find(instance.id);
    return it == input.gold.end() ? instance.gold : it->second;
}

std::string lowercase_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Constraint anatomy for the per-operator checks. Mirrors operators_in:
// the ∈ hidden inside the ¬(C) sugar is not a separate occurrence.
struct ConstraintParts {
    std::vector<const glyph::Pred*> members; // ∈ occurrences
    std::vector<const glyph::Not*> negations;
    std::vector<const glyph::Implies*> rules;
};

void dissect(const ExprPtr& expr, ConstraintParts& parts) {
    if (!expr) return;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, glyph::Pred>) {
                if (node.op == Op::MemberOf) parts.members.push_back(&node);
            } else if constexpr (std::is_same_v<T, glyph::Not>) {
                parts.negations.push_back(&node);
                if (const auto* p = std::get_if<glyph::Pred>(&node.inner->node);
                    !p || p->op != Op::MemberOf) {
                    dissect(node.inner, parts);
                }
            } else if constexpr (std::is_same_v<T, glyph::And>) {
                for (const auto& c : node.conjuncts) dissect(c, parts);
            } else if constexpr (std::is_same_v<T, glyph::Or>) {
                for (const auto& d : node.disjuncts) dissect(d, parts);
            } else if constexpr (std::is_same_v<T, glyph::Implies>) {
                parts.rules.push_back(&node);
                dissect(node.condition, parts);
            }
        },
        expr->node);
}

bool core_only(const std::map<Op, int>& occurrences) {
    for (const auto& [op, count] : occurrences) {
        (void)count;
        if (op != Op::MemberOf && op != Op::Negation && op != Op::Intersect &&
            op != Op::Arrow && op != Op::Implication && op != Op::Compose) {
            return false;
        }
    }
    return true;
}

bool item_in(const Item& item, const std::string& category) {
    return std::find(item.categories.begin(), item.categories.end(), category) !=
           item.categories.end();
}

// ---- per-family frame and operator checks ----------------------------------

struct TrialChecks {
    std::map<Op, bool> pass; // ops present in the instruction only
};

bool selection_shape(const util::Json& output) {
    if (!output.is_array()) return false;
    return std::all_of(output.begin(), output.end(),
                       [](const util::Json& e) { return e.is_string(); });
}

TrialChecks check_selection(const TaskInstance& instance, const util::Json& gold,
                            const util::Json& output, const std::map<Op, int>& occurrences) {
    const bool shape = selection_shape(output);
    std::unordered_map<std::string, const Item*> by_name;
    for (const Item& item : instance.universe.items) by_name[item.name] = &item;

    ConstraintParts parts;
    dissect(instance.instruction.constraint, parts);

    bool mem = shape;
    bool neg = shape;
    if (shape) {
        for (const auto& element : output) {
            const std::string name = element.get<std::string>();
            auto found = by_name.find(name);
            for (const auto* pred : parts.members) {
                // Unknown names cannot be shown to be members: violators.
                if (found == by_name.end() || !item_in(*found->second, pred->category)) {
                    mem = false;
                }
            }
            for (const auto* negation : parts.negations) {
                if (found != by_name.end() &&
                    oracle::eval_constraint(negation->inner, *found->second)) {
                    neg = false;
                }
            }
        }
    }
    const bool exact =
        shape && normalize(output, instance.family) == normalize(gold, instance.family);

    TrialChecks checks;
    for (const auto& [op, count] : occurrences) {
        (void)count;
        switch (op) {
            case Op::MemberOf: checks.pass[op] = mem; break;
            case Op::Negation: checks.pass[op] = neg; break;
            case Op::Intersect: checks.pass[op] = exact; break;
            case Op::Arrow:
            case Op::Implication: checks.pass[op] = shape; break;
            default: checks.pass[op] = false; break;
        }
    }
    return checks;
}

TrialChecks check_extraction(const TaskInstance& instance, const util::Json& gold,
                             const util::Json& output, const std::map<Op, int>& occurrences) {
    ConstraintParts parts;
    dissect(instance.instruction.constraint, parts);
    std::set<std::string> requested;
    for (const auto* pred : parts.members) requested.insert(pred->category);

    bool shape = output.is_object();
    if (shape) {
        std::set<std::string> keys;
        for (const auto& [key, member] : output.items()) {
            keys.insert(key);
            if (!member.is_array()) shape = false;
            else {
                for (const auto& e : member) {
                    if (!e.is_string()) shape = false;
                }
            }
        }
        if (keys != requested) shape = false;
    }

    // sentence → planted category
    std::unordered_map<std::string, std::string> planted;
    for (const auto& [sentence, category] : instance.sentences) planted[sentence] = category;

    bool mem = shape;
    if (shape) {
        for (const auto& [key, member] : output.items()) {
            for (const auto& element : member) {
                auto found = planted.find(element.get<std::string>());
                if (found == planted.end() || found->second != key) mem = false;
            }
        }
    }
    const bool exact =
        shape && normalize(output, instance.family) == normalize(gold, instance.family);

    TrialChecks checks;
    for (const auto& [op, count] : occurrences) {
        (void)count;
        switch (op) {
            case Op::MemberOf: checks.pass[op] = mem; break;
            case Op::Intersect: checks.pass[op] = exact; break;
            case Op::Arrow:
            case Op::Implication: checks.pass[op] = shape; break;
            default: checks.pass[op] = false; break;
        }
    }
    return checks;
}

TrialChecks check_transformation(const TaskInstance& instance, const util::Json& gold,
                                 const util::Json& output,
                                 const std::map<Op, int>& occurrences) {
    bool shape = output.is_array();
    if (shape) {
        for (const auto& record : output) {
            if (!record.is_object() || !record.contains("name") ||
                !record["name"].is_string()) {
                shape = false;
                break;
            }
            for (const auto& [key, member] : record.items()) {
                (void)key;
                if (!member.is_string()) shape = false;
            }
        }
    }

    ConstraintParts parts;
    dissect(instance.instruction.constraint, parts);

    bool lowered_names = false;
    std::vector<const glyph::ActionClause*> steps;
    if (const auto* single = std::get_if<glyph::ActionClause>(&instance.instruction.task)) {
        steps.push_back(single);
    } else {
        for (const auto& step : std::get<glyph::ComposeChain>(instance.instruction.task).steps) {
            steps.push_back(&step);
        }
    }
    for (const auto* step : steps) {
        if (step->verb == "lowercase" && step->args.size() == 1 &&
            step->args[0].key == "name") {
            lowered_names = true;
        }
    }

    // Rule check: every fired consequent present with the last-wins value,
    // none applied where the condition failed. Records matched by final name.
    bool rules_ok = shape;
    if (shape) {
        std::unordered_map<std::string, const util::Json*> by_name;
        for (const auto& record : output) {
            const std::string name = record["name"].get<std::string>();
            if (by_name.count(name)) rules_ok = false; // ambiguous records
            by_name[name] = &record;
        }
        std::set<std::string> rule_keys;
        for (const auto* rule : parts.rules) {
            if (!rule->action.args.empty()) rule_keys.insert(rule->action.args[0].key);
        }
        for (const Item& item : instance.universe.items) {
            std::map<std::string, std::string> expected = item.attributes;
            bool fired = false;
            for (const auto* rule : parts.rules) {
                if (rule->action.args.empty() || !rule->action.args[0].value) continue;
                if (oracle::eval_constraint(rule->condition, item)) {
                    expected[rule->action.args[0].key] = *rule->action.args[0].value;
                    fired = true;
                }
            }
            const std::string final_name = lowered_names ? lowercase_ascii(item.name) : item.name;
            auto found = by_name.find(final_name);
            if (found == by_name.end()) {
                if (fired) rules_ok = false; // fired consequent missing entirely
                continue;
            }
            const util::Json& record = *found->second;
            for (const std::string& key : rule_keys) {
                const bool want = expected.count(key) > 0;
                const bool got = record.contains(key);
                if (want != got) rules_ok = false;
                else if (want && record[key].get<std::string>() != expected[key]) rules_ok = false;
            }
        }
    }

    // ∘ check: step order is observable through the final record order.
    bool order_ok = shape && output.size() == gold.size();
    if (order_ok) {
        for (std::size_t i = 0; i < output.size(); ++i) {
            if (output[i]["name"] != gold[i]["name"]) order_ok = false;
        }
    }

    TrialChecks checks;
    for (const auto& [op, count] : occurrences) {
        (void)count;
        switch (op) {
            case Op::MemberOf:
            case Op::Negation:
            case Op::Intersect: checks.pass[op] = rules_ok; break;
            case Op::Implication: checks.pass[op] = rules_ok && shape; break;
            case Op::Arrow: checks.pass[op] = shape; break;
            case Op::Compose: checks.pass[op] = order_ok && shape; break;
            default: checks.pass[op] = false; break;
        }
    }
    return checks;
}

TrialChecks run_checks(const TaskInstance& instance, const util::Json& gold,
                       const util::Json& output, const std::map<Op, int>& occurrences) {
    switch (instance.family) {
        case TaskFamily::Selection:
        case TaskFamily::ConstraintComposition:
            return check_selection(instance, gold, output, occurrences);
        case TaskFamily::Extraction:
            return check_extraction(instance, gold, output, occurrences);
        case TaskFamily::ConditionalTransformation:
            return check_transformation(instance, gold, output, occurrences);
    }
    return {};
}

} // namespace

std::vector<EquivalenceStat> semantic_equivalence(const ScoreInput& input,
                                                  const std::string& pair) {
    const std::string other = pair == "NL_vs_CTRL" ? "CTRL" : "MG";
    const Indexes index(input);

    std::map<std::pair<std::string, TaskFamily>, EquivalenceStat> cells;
    for (const std::string& model : index.models) {
        for (const auto& instance : input.corpus) {
            auto& cell = cells[{model, instance.family}];
            cell.model = model;
            cell.family = instance.family;
            cell.pair = pair;

            const TrialRecord* lhs = index.find(instance.id, model, "NL");
            const TrialRecord* rhs = index.find(instance.id, model, other);
            if (!lhs || !rhs || lhs->status != TrialStatus::Ok ||
                rhs->status != TrialStatus::Ok) {
                cell.excluded_pairs++;
                continue;
            }
            cell.pairs_total++;
            const ParsedOutput a = parse_output(lhs->raw_response, input.mode);
            const ParsedOutput b = parse_output(rhs->raw_response, input.mode);
            if (a.status == ParseStatus::Ok && b.status == ParseStatus::Ok &&
                normalize(*a.value, instance.family) == normalize(*b.value, instance.family)) {
                cell.pairs_identical++;
            }
        }
    }

    std::vector<EquivalenceStat> stats;
    for (auto& [key, cell] : cells) stats.push_back(std::move(cell));
    return stats;
}

std::vector<FidelityStat> operator_fidelity(const ScoreInput& input) {
    const Indexes index(input);

    struct Tally {
        int with_all = 0, pass_all = 0;
        int with_parsed = 0, pass_parsed = 0;
    };
    std::map<std::pair<std::string, Op>, Tally> tallies;

    for (const auto& trial : input.trials) {
        if (trial.variant != "MG" || trial.status != TrialStatus::Ok) continue;
        auto found = index.instances.find(trial.instance_id);
        if (found == index.instances.end()) continue;
        const TaskInstance& instance = *found->second;
        const std::map<Op, int> occurrences = glyph::operators_in(instance.instruction);
        if (!core_only(occurrences)) continue; // no checks defined off the core set

        const ParsedOutput parsed = parse_output(trial.raw_response, input.mode);
        if (parsed.status != ParseStatus::Ok) {
            for (const auto& [op, count] : occurrences) {
                (void)count;
                tallies[{trial.model, op}].with_all++;
            }
            continue;
        }
        const TrialChecks checks =
            run_checks(instance, gold_of(input, instance), *parsed.value, occurrences);
        for (const auto& [op, ok] : checks.pass) {
            Tally& tally = tallies[{trial.model, op}];
            tally.with_all++;
            tally.with_parsed++;
            if (ok) {
                tally.pass_all++;
                tally.pass_parsed++;
            }
        }
    }

    std::vector<FidelityStat> stats;
    for (const auto& [key, tally] : tallies) {
        stats.push_back({key.first, key.second, "all_trials", tally.with_all, tally.pass_all});
        stats.push_back(
            {key.first, key.second, "parsed_only", tally.with_parsed, tally.pass_parsed});
    }
    return stats;
}

std::vector<ParseStat> parse_success(const ScoreInput& input) {
    const Indexes index(input);
    std::map<std::tuple<std::string, TaskFamily, std::string>, ParseStat> cells;
    for (const auto& trial : input.trials) {
        if (trial.status != TrialStatus::Ok) continue;
        auto found = index.instances.find(trial.instance_id);
        if (found == index.instances.end()) continue;
        auto& cell = cells[{trial.model, found->second->family, trial.variant}];
        cell.model = trial.model;
        cell.family = found->second->family;
        cell.variant = trial.variant;
        cell.trials++;
        if (parse_output(trial.raw_response, input.mode).status == ParseStatus::Ok) {
            cell.parse_ok++;
        }
    }
    std::vector<ParseStat> stats;
    for (auto& [key, cell] : cells) stats.push_back(std::move(cell));
    return stats;
}

} // namespace metaglyph::metrics
