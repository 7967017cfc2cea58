#include "metaglyph/forge/instances.hpp"

#include <algorithm>
#include <cstdio>

#include "metaglyph/errors.hpp"
#include "metaglyph/forge/universe.hpp"
#include "metaglyph/glyph/parser.hpp"
#include "metaglyph/glyph/printer.hpp"
#include "metaglyph/util/rng.hpp"

namespace metaglyph::forge {

using namespace metaglyph::glyph;

std::string family_key(TaskFamily family) {
    switch (family) {
        case TaskFamily::Selection: return "selection";
        case TaskFamily::Extraction: return "extraction";
        case TaskFamily::ConstraintComposition: return "constraint_composition";
        case TaskFamily::ConditionalTransformation: return "conditional_transformation";
    }
    throw ConfigError("unknown task family");
}

TaskFamily family_from_key(const std::string& key) {
    for (TaskFamily family : kAllFamilies) {
        if (family_key(family) == key) return family;
    }
    throw ConfigError("unknown task family '" + key + "'");
}

namespace {

std::string pad3(int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return buf;
}

std::vector<std::string> sample(util::Rng& rng, std::vector<std::string> pool,
                                std::size_t count) {
    rng.shuffle(pool);
    pool.resize(count);
    return pool;
}

const std::vector<std::string>& risk_categories() {
    static const std::vector<std::string> cats = {"security", "performance",
                                                  "compliance", "availability"};
    return cats;
}

const std::vector<std::string>& sentence_bank(const std::string& category) {
    static const std::map<std::string, std::vector<std::string>> banks = {
        {"security",
         {"The security audit flagged two services using default credentials.",
          "A security scan detected an exposed admin endpoint.",
          "Security logging was disabled on the billing cluster.",
          "The security team reported a phishing attempt against staff."}},
        {"performance",
         {"Performance degraded sharply once traffic passed the cache layer.",
          "The performance suite showed p99 latency doubling under load.",
          "A performance regression added forty milliseconds to checkout.",
          "Performance monitoring recorded sustained CPU saturation overnight."}},
        {"compliance",
         {"The compliance review found unsigned data processing agreements.",
          "Compliance checks failed for two regional data stores.",
          "A compliance gap left audit trails incomplete for March.",
          "The compliance officer escalated a retention policy violation."}},
        {"availability",
         {"Availability dropped below target during the failover drill.",
          "The availability report listed three unplanned outages.",
          "An availability incident took the search tier offline briefly.",
          "Availability alerts fired when the replica set lost quorum."}},
    };
    return banks.at(category);
}

int draw_size(util::Rng& rng, const ForgeConfig& config) {
    return config.universe_min +
           static_cast<int>(rng.next_below(config.universe_max - config.universe_min + 1));
}

// Rewrites one item's categories so the conjunction is satisfiable; keeps
// selection golds nonempty.
void plant_witness(ItemUniverse& universe, util::Rng& rng,
                   const std::vector<std::string>& required,
                   const std::vector<std::string>& forbidden) {
    auto& item = universe.items[rng.next_below(universe.items.size())];
    for (const auto& category : forbidden) {
        item.categories.erase(
            std::remove(item.categories.begin(), item.categories.end(), category),
            item.categories.end());
    }
    for (const auto& category : required) {
        if (std::find(item.categories.begin(), item.categories.end(), category) ==
            item.categories.end()) {
            item.categories.push_back(category);
        }
    }
    std::sort(item.categories.begin(), item.categories.end());
}

Task select_task() { return make_task({ActionClause{"select", {}}}); }

// Selection: positives first, one trailing negation.
void fill_selection(TaskInstance& instance, util::Rng& rng, const ForgeConfig& config) {
    const auto vocab = sample(rng, config.selection_vocab, 4 + rng.next_below(2));
    instance.universe = generate_universe(rng.next_u64(), draw_size(rng, config), vocab,
                                          config.category_prob);
    const std::size_t positives = 2 + rng.next_below(2);
    const auto cats = sample(rng, vocab, positives + 1);
    std::vector<ExprPtr> conjuncts;
    for (std::size_t i = 0; i < positives; ++i) {
        conjuncts.push_back(make_pred(Op::MemberOf, cats[i]));
    }
    conjuncts.push_back(make_not(make_pred(Op::MemberOf, cats[positives])));
    plant_witness(instance.universe, rng, {cats.begin(), cats.begin() + positives},
                  {cats[positives]});
    instance.instruction.anchor.name = "items";
    instance.instruction.constraint = make_and(std::move(conjuncts));
    instance.instruction.task = select_task();
}

// ConstraintComposition: 4-5 conjuncts, negations interleaved.
void fill_composition(TaskInstance& instance, util::Rng& rng, const ForgeConfig& config) {
    const auto vocab = sample(rng, config.selection_vocab, 5 + rng.next_below(2));
    instance.universe = generate_universe(rng.next_u64(), draw_size(rng, config), vocab,
                                          config.category_prob);
    const std::size_t total = 4 + rng.next_below(2);
    const std::size_t negatives = 1 + rng.next_below(2);
    const auto cats = sample(rng, vocab, total);
    std::vector<bool> negate(total, false);
    for (std::size_t i = 0; i < negatives; ++i) negate[i] = true;
    rng.shuffle(negate);
    std::vector<ExprPtr> conjuncts;
    std::vector<std::string> required, forbidden;
    for (std::size_t i = 0; i < total; ++i) {
        auto pred = make_pred(Op::MemberOf, cats[i]);
        (negate[i] ? forbidden : required).push_back(cats[i]);
        conjuncts.push_back(negate[i] ? make_not(std::move(pred)) : std::move(pred));
    }
    plant_witness(instance.universe, rng, required, forbidden);
    instance.instruction.anchor.name = "items";
    instance.instruction.constraint = make_and(std::move(conjuncts));
    instance.instruction.task = select_task();
}

// ConditionalTransformation: 2-3 rules with distinct condition categories
// and distinct target attributes, then a two-step compose chain.
void fill_transformation(TaskInstance& instance, util::Rng& rng, const ForgeConfig& config) {
    static const std::map<std::string, std::vector<std::string>> attr_values = {
        {"label", {"internal", "external", "reviewed"}},
        {"access", {"full", "basic", "restricted"}},
        {"status", {"active", "flagged"}},
    };
    const auto vocab = sample(rng, config.transform_vocab, 4 + rng.next_below(2));
    instance.universe = generate_universe(rng.next_u64(), draw_size(rng, config), vocab,
                                          config.category_prob, person_names());
    const std::size_t rules = 2 + rng.next_below(2);
    const auto cats = sample(rng, vocab, rules);
    const auto keys = sample(rng, {"label", "access", "status"}, rules);
    std::vector<ExprPtr> conjuncts;
    for (std::size_t i = 0; i < rules; ++i) {
        const auto& values = attr_values.at(keys[i]);
        conjuncts.push_back(make_implies(make_pred(Op::MemberOf, cats[i]),
                                         make_assignment(keys[i], rng.pick(values))));
    }
    std::vector<ActionClause> steps = {ActionClause{"lowercase", {Arg{"name", std::nullopt}}},
                                       ActionClause{"sort", {Arg{"name", std::nullopt}}}};
    if (rng.next_bool(0.5)) std::swap(steps[0], steps[1]);
    instance.instruction.anchor.name = "items";
    instance.instruction.constraint = make_and(std::move(conjuncts));
    instance.instruction.task = make_task(std::move(steps));
}

// Extraction: report text with planted category sentences; gold is known
// by construction and filled here.
void fill_extraction(TaskInstance& instance, util::Rng& rng, const ForgeConfig&) {
    const std::size_t requested_count = 2 + rng.next_below(2);
    const auto requested = sample(rng, risk_categories(), requested_count);

    std::vector<std::pair<std::string, std::string>> tagged;
    for (const auto& category : requested) {
        const auto picks =
            sample(rng, sentence_bank(category), 1 + rng.next_below(3) / 2);
        for (const auto& text : picks) tagged.emplace_back(text, category);
    }
    std::vector<std::string> fillers;
    for (const auto& category : risk_categories()) {
        if (std::find(requested.begin(), requested.end(), category) == requested.end()) {
            fillers.push_back(category);
        }
    }
    const std::size_t filler_count = rng.next_below(2);
    for (const auto& category : sample(rng, fillers, filler_count)) {
        tagged.emplace_back(sample(rng, sentence_bank(category), 1)[0], category);
    }
    rng.shuffle(tagged);

    std::string report;
    for (const auto& [text, category] : tagged) {
        if (!report.empty()) report += " ";
        report += text;
    }
    instance.source_text = report;
    instance.sentences = tagged;

    util::Json gold = util::Json::object();
    for (const auto& category : requested) gold[category] = util::Json::array();
    for (const auto& [text, category] : tagged) {
        if (gold.contains(category)) gold[category].push_back(text);
    }
    instance.gold = gold;

    std::vector<ExprPtr> conjuncts;
    for (const auto& category : requested) {
        conjuncts.push_back(make_pred(Op::MemberOf, category));
    }
    instance.instruction.anchor.name = "report";
    instance.instruction.constraint = make_and(std::move(conjuncts));
    instance.instruction.task = make_task({ActionClause{"extract", {}}});
}

} // namespace

std::vector<TaskInstance> generate_instances(TaskFamily family, int n, std::uint64_t seed,
                                             const ForgeConfig& config) {
    if (n < 1) throw ConfigError("instance count must be at least 1");
    validate(config);
    std::vector<TaskInstance> instances;
    instances.reserve(n);
    for (int i = 0; i < n; ++i) {
        util::Rng rng = util::Rng(seed).child(family_key(family), i);
        TaskInstance instance;
        instance.id = family_key(family) + "-" + pad3(i);
        instance.family = family;
        instance.seed = rng.next_u64();
        switch (family) {
            case TaskFamily::Selection: fill_selection(instance, rng, config); break;
            case TaskFamily::Extraction: fill_extraction(instance, rng, config); break;
            case TaskFamily::ConstraintComposition:
                fill_composition(instance, rng, config);
                break;
            case TaskFamily::ConditionalTransformation:
                fill_transformation(instance, rng, config);
                break;
        }
        instances.push_back(std::move(instance));
    }
    return instances;
}

util::Json instance_to_json(const TaskInstance& instance) {
    util::Json row;
    row["id"] = instance.id;
    row["family"] = family_key(instance.family);
    row["seed"] = instance.seed;
    row["instruction"] = print_instruction(instance.instruction);
    row["gold"] = instance.gold;
    if (!instance.universe.items.empty()) {
        util::Json items = util::Json::array();
        for (const auto& item : instance.universe.items) {
            items.push_back({{"name", item.name},
                             {"categories", item.categories},
                             {"attributes", item.attributes}});
        }
        row["universe"] = {{"seed", instance.universe.seed},
                           {"vocab", instance.universe.vocab},
                           {"items", std::move(items)}};
    }
    if (!instance.source_text.empty()) {
        row["source_text"] = instance.source_text;
        util::Json sentences = util::Json::array();
        for (const auto& [text, category] : instance.sentences) {
            sentences.push_back({text, category});
        }
        row["sentences"] = std::move(sentences);
    }
    return row;
}

TaskInstance instance_from_json(const util::Json& row) {
    TaskInstance instance;
    instance.id = row.at("id").get<std::string>();
    instance.family = family_from_key(row.at("family").get<std::string>());
    instance.seed = row.at("seed").get<std::uint64_t>();
    instance.instruction = parse_instruction(row.at("instruction").get<std::string>());
    instance.gold = row.value("gold", util::Json());
    if (row.contains("universe")) {
        const auto& universe = row.at("universe");
        instance.universe.seed = universe.at("seed").get<std::uint64_t>();
        instance.universe.vocab = universe.at("vocab").get<std::vector<std::string>>();
        for (const auto& entry : universe.at("items")) {
            Item item;
            item.name = entry.at("name").get<std::string>();
            item.categories = entry.at("categories").get<std::vector<std::string>>();
            item.attributes =
                entry.at("attributes").get<std::map<std::string, std::string>>();
            instance.universe.items.push_back(std::move(item));
        }
    }
    if (row.contains("source_text")) {
        instance.source_text = row.at("source_text").get<std::string>();
        for (const auto& entry : row.at("sentences")) {
            instance.sentences.emplace_back(entry.at(0).get<std::string>(),
                                            entry.at(1).get<std::string>());
        }
    }
    return instance;
}

} // namespace metaglyph::forge
