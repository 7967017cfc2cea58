#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "metaglyph/errors.hpp"
#include "metaglyph/forge/config.hpp"
#include "metaglyph/forge/instances.hpp"
#include "metaglyph/forge/render.hpp"
#include "metaglyph/forge/tokenizer.hpp"
#include "metaglyph/forge/universe.hpp"
#include "metaglyph/glyph/ast.hpp"
#include "metaglyph/glyph/parser.hpp"

using namespace metaglyph;
using namespace metaglyph::forge;

namespace {

TaskInstance paper_selection_instance() {
    TaskInstance instance;
    instance.id = "selection-paper";
    instance.family = TaskFamily::Selection;
    instance.universe.vocab = {"bird", "mammal", "pet"};
    instance.universe.items = {
        Item{"cat", {"mammal", "pet"}, {}},
        Item{"dog", {"mammal", "pet"}, {}},
        Item{"sparrow", {"bird", "pet"}, {}},
    };
    instance.instruction = glyph::parse_instruction("items | ∈(mammal) ∩ ¬(bird) ⇒ select");
    return instance;
}

struct FamilyStats {
    double nl = 0, mg = 0, reduction = 0;
};

FamilyStats corpus_stats(TaskFamily family, int n, std::uint64_t seed) {
    FamilyStats stats;
    const auto instances = generate_instances(family, n, seed);
    for (const auto& instance : instances) {
        const auto triplet = compile_triplet(instance);
        stats.nl += triplet.nl_tokens;
        stats.mg += triplet.mg_tokens;
        stats.reduction += compression_ratio(triplet.nl_tokens, triplet.mg_tokens);
    }
    stats.nl /= n;
    stats.mg /= n;
    stats.reduction /= n;
    return stats;
}

} // namespace

TEST_CASE("tokenize counts maximal non-whitespace runs") {
    CHECK(tokenize("∈(mammal) ∩ ¬(bird)") == 3);
    CHECK(tokenize("") == 0);
    CHECK(tokenize("a  b\tc\n") == 3);
    CHECK(tokenize("   ") == 0);
    CHECK(tokenize("one") == 1);
}

TEST_CASE("generate_universe is deterministic and respects size") {
    const std::vector<std::string> vocab = {"mammal", "bird", "pet"};
    const auto a = generate_universe(7, 10, vocab);
    const auto b = generate_universe(7, 10, vocab);
    REQUIRE(a.items.size() == 10);
    REQUIRE(b.items.size() == 10);
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        CHECK(a.items[i].name == b.items[i].name);
        CHECK(a.items[i].categories == b.items[i].categories);
    }
    const auto single = generate_universe(7, 1, vocab);
    CHECK(single.items.size() == 1);
    CHECK_FALSE(single.items[0].categories.empty());
}

TEST_CASE("generate_universe validates inputs") {
    CHECK_THROWS_AS(generate_universe(1, 5, {}), ConfigError);
    CHECK_THROWS_AS(generate_universe(1, 5, {"solo"}), ConfigError);
    CHECK_THROWS_AS(generate_universe(1, 0, {"a", "b"}), ConfigError);
    CHECK_THROWS_AS(generate_universe(1, 5, {"a", "b"}, 0.0), ConfigError);
    CHECK_THROWS_AS(generate_universe(1, 5, {"a", "b"}, 1.0), ConfigError);
}

TEST_CASE("generate_universe: names unique, categories sorted and covered") {
    const std::vector<std::string> vocab = {"pet", "bird", "mammal", "reptile"};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto universe = generate_universe(seed, 12, vocab);
        std::set<std::string> names;
        std::set<std::string> seen;
        for (const auto& item : universe.items) {
            CHECK(names.insert(item.name).second);
            CHECK(std::is_sorted(item.categories.begin(), item.categories.end()));
            CHECK_FALSE(item.categories.empty());
            seen.insert(item.categories.begin(), item.categories.end());
        }
        CHECK(seen.size() == vocab.size()); // coverage patch: size ≥ |vocab|
    }
}

TEST_CASE("generate_universe: Monte Carlo category frequency near category_prob") {
    const std::vector<std::string> vocab = {"a", "b", "c", "d"};
    std::map<std::string, int> hits;
    int total_items = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto universe = generate_universe(seed, 10, vocab, 0.5);
        total_items += static_cast<int>(universe.items.size());
        for (const auto& item : universe.items) {
            for (const auto& category : item.categories) ++hits[category];
        }
    }
    for (const auto& category : vocab) {
        const double freq = static_cast<double>(hits[category]) / total_items;
        CHECK(freq > 0.45);
        CHECK(freq < 0.55);
    }
}

TEST_CASE("generate_instances: selection shape is And[∈…, ¬] with trailing negation") {
    const auto instances = generate_instances(TaskFamily::Selection, 3, 1);
    REQUIRE(instances.size() == 3);
    for (const auto& instance : instances) {
        CHECK(instance.instruction.anchor.name == "items");
        REQUIRE(instance.instruction.constraint != nullptr);
        const auto* conj = std::get_if<glyph::And>(&instance.instruction.constraint->node);
        REQUIRE(conj != nullptr);
        REQUIRE(conj->conjuncts.size() >= 3);
        for (std::size_t i = 0; i + 1 < conj->conjuncts.size(); ++i) {
            const auto* pred = std::get_if<glyph::Pred>(&conj->conjuncts[i]->node);
            REQUIRE(pred != nullptr);
            CHECK(pred->op == glyph::Op::MemberOf);
        }
        CHECK(std::holds_alternative<glyph::Not>(conj->conjuncts.back()->node));
    }
}

TEST_CASE("generate_instances: composition uses ≥4 ∩-joined conjuncts") {
    for (const auto& instance :
         generate_instances(TaskFamily::ConstraintComposition, 10, 3)) {
        const auto* conj = std::get_if<glyph::And>(&instance.instruction.constraint->node);
        REQUIRE(conj != nullptr);
        CHECK(conj->conjuncts.size() >= 4);
        int negations = 0;
        for (const auto& part : conj->conjuncts) {
            if (std::holds_alternative<glyph::Not>(part->node)) ++negations;
        }
        CHECK(negations >= 1);
    }
}

TEST_CASE("generate_instances: transformation carries rules and a compose chain") {
    for (const auto& instance :
         generate_instances(TaskFamily::ConditionalTransformation, 10, 2)) {
        const auto* conj = std::get_if<glyph::And>(&instance.instruction.constraint->node);
        REQUIRE(conj != nullptr);
        std::set<std::string> rule_keys;
        std::set<std::string> rule_cats;
        for (const auto& part : conj->conjuncts) {
            const auto* rule = std::get_if<glyph::Implies>(&part->node);
            REQUIRE(rule != nullptr);
            const auto* pred = std::get_if<glyph::Pred>(&rule->condition->node);
            REQUIRE(pred != nullptr);
            CHECK(rule_cats.insert(pred->category).second);
            REQUIRE(rule->action.verb == "set");
            REQUIRE(rule->action.args.size() == 1);
            CHECK(rule_keys.insert(rule->action.args[0].key).second);
        }
        CHECK(conj->conjuncts.size() >= 2);
        const auto* chain = std::get_if<glyph::ComposeChain>(&instance.instruction.task);
        REQUIRE(chain != nullptr);
        REQUIRE(chain->steps.size() == 2);
        const bool has_lowercase = chain->steps[0].verb == "lowercase" ||
                                   chain->steps[1].verb == "lowercase";
        const bool has_sort =
            chain->steps[0].verb == "sort" || chain->steps[1].verb == "sort";
        CHECK(has_lowercase);
        CHECK(has_sort);
    }
}

TEST_CASE("generate_instances: extraction plants ≥1 sentence per requested category") {
    for (const auto& instance : generate_instances(TaskFamily::Extraction, 10, 4)) {
        CHECK(instance.instruction.anchor.name == "report");
        REQUIRE_FALSE(instance.source_text.empty());
        REQUIRE(instance.gold.is_object());
        CHECK(instance.gold.size() >= 2);
        for (const auto& [category, sentences] : instance.gold.items()) {
            REQUIRE(sentences.is_array());
            CHECK(sentences.size() >= 1);
            for (const auto& sentence : sentences) {
                CHECK(instance.source_text.find(sentence.get<std::string>()) !=
                      std::string::npos);
            }
        }
        // Report order: gold arrays follow source_text position.
        for (const auto& [category, sentences] : instance.gold.items()) {
            std::size_t last = 0;
            for (const auto& sentence : sentences) {
                const auto pos = instance.source_text.find(sentence.get<std::string>());
                CHECK(pos >= last);
                last = pos;
            }
        }
    }
}

TEST_CASE("generate_instances is deterministic per (family, n, seed)") {
    for (TaskFamily family : kAllFamilies) {
        const auto a = generate_instances(family, 5, 42);
        const auto b = generate_instances(family, 5, 42);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(util::to_line(instance_to_json(a[i])) ==
                  util::to_line(instance_to_json(b[i])));
        }
        const auto c = generate_instances(family, 5, 43);
        CHECK(util::to_line(instance_to_json(a[0])) !=
              util::to_line(instance_to_json(c[0])));
    }
}

TEST_CASE("instance json round-trips") {
    for (TaskFamily family : kAllFamilies) {
        for (const auto& instance : generate_instances(family, 3, 9)) {
            const auto row = instance_to_json(instance);
            const auto back = instance_from_json(row);
            CHECK(util::to_line(instance_to_json(back)) == util::to_line(row));
        }
    }
}

TEST_CASE("render_mg: paper selection instance reproduces the published line") {
    const auto instance = paper_selection_instance();
    const auto mg = render_mg(instance);
    CHECK(mg.substr(0, mg.find('\n')) == "items | ∈(mammal) ∩ ¬(bird) ⇒ select");
}

TEST_CASE("render_mg never contains legend words") {
    static const std::vector<std::string> banned = {"means", "where", "legend"};
    for (TaskFamily family : kAllFamilies) {
        for (const auto& instance : generate_instances(family, 25, 7)) {
            auto mg = render_mg(instance);
            std::transform(mg.begin(), mg.end(), mg.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            for (const auto& word : banned) {
                CHECK(mg.find(word) == std::string::npos);
            }
        }
    }
}

TEST_CASE("render_nl: paper selection instance uses the template register") {
    const auto nl = render_nl(paper_selection_instance());
    CHECK(nl.find("belongs to the category of mammals") != std::string::npos);
    CHECK(nl.find("must not be in the category of birds") != std::string::npos);
}

TEST_CASE("render_nl: no constraint, no filtering sentence") {
    auto instance = paper_selection_instance();
    instance.instruction = glyph::parse_instruction("items ⇒ select");
    const auto nl = render_nl(instance);
    CHECK(nl.find("qualifies only when") == std::string::npos);
    CHECK(nl.find("belongs to the category") == std::string::npos);
}

TEST_CASE("render_nl: transformation prose uses if/then and first/after-that") {
    for (const auto& instance :
         generate_instances(TaskFamily::ConditionalTransformation, 5, 11)) {
        const auto nl = render_nl(instance);
        CHECK(nl.find("If the item belongs to the category of") != std::string::npos);
        CHECK(nl.find(", then set its") != std::string::npos);
        CHECK(nl.find("First, ") != std::string::npos);
        CHECK(nl.find("; after that, ") != std::string::npos);
    }
}

TEST_CASE("compile_triplet: token parity and shared data block") {
    for (TaskFamily family : kAllFamilies) {
        for (const auto& instance : generate_instances(family, 25, 5)) {
            const auto triplet = compile_triplet(instance);
            CHECK(triplet.ctrl_tokens == triplet.mg_tokens);
            const auto data = data_block(instance);
            CHECK(triplet.nl.find(data) != std::string::npos);
            CHECK(triplet.mg.find(data) != std::string::npos);
            CHECK(triplet.ctrl.find(data) != std::string::npos);
            const auto format = format_sentence(family);
            CHECK(triplet.nl.find(format) != std::string::npos);
            CHECK(triplet.mg.find(format) != std::string::npos);
            CHECK(triplet.ctrl.find(format) != std::string::npos);
        }
    }
}

TEST_CASE("compression_ratio worked examples") {
    CHECK(compression_ratio(215, 41) == doctest::Approx(0.809).epsilon(0.001));
    CHECK(compression_ratio(176, 52) == doctest::Approx(0.705).epsilon(0.001));
    CHECK(compression_ratio(100, 100) == 0.0);
    CHECK_THROWS_AS(compression_ratio(50, 60), DomainError);
    CHECK_THROWS_AS(compression_ratio(0, 0), DomainError);
}

TEST_CASE("default corpus lands in the calibrated compression bands") {
    const std::uint64_t seed = 2026;
    const auto selection = corpus_stats(TaskFamily::Selection, 100, seed);
    const auto extraction = corpus_stats(TaskFamily::Extraction, 100, seed);
    const auto composition = corpus_stats(TaskFamily::ConstraintComposition, 100, seed);
    const auto transformation =
        corpus_stats(TaskFamily::ConditionalTransformation, 100, seed);

    std::ostringstream summary;
    summary << "selection nl=" << selection.nl << " mg=" << selection.mg
            << " red=" << selection.reduction << " | extraction nl=" << extraction.nl
            << " mg=" << extraction.mg << " red=" << extraction.reduction
            << " | composition nl=" << composition.nl << " mg=" << composition.mg
            << " red=" << composition.reduction
            << " | transformation nl=" << transformation.nl
            << " mg=" << transformation.mg << " red=" << transformation.reduction;
    INFO(summary.str());

    const auto within = [](double value, double target, double rel) {
        return std::abs(value - target) <= target * rel;
    };
    CHECK(within(selection.nl, 215, 0.15));
    CHECK(within(extraction.nl, 176, 0.15));
    CHECK(within(composition.nl, 134, 0.15));
    CHECK(within(transformation.nl, 164, 0.15));
    CHECK(within(selection.mg, 41, 0.15));
    CHECK(within(extraction.mg, 52, 0.15));
    CHECK(within(composition.mg, 48, 0.15));
    CHECK(within(transformation.mg, 62, 0.15));

    CHECK(std::abs(selection.reduction - 0.809) <= 0.10);
    CHECK(std::abs(extraction.reduction - 0.705) <= 0.10);
    CHECK(std::abs(composition.reduction - 0.642) <= 0.10);
    CHECK(std::abs(transformation.reduction - 0.622) <= 0.10);

    CHECK(selection.reduction > extraction.reduction);
    CHECK(extraction.reduction > composition.reduction);
    CHECK(composition.reduction > transformation.reduction);
}

TEST_CASE("forge config parsing") {
    const ForgeConfig defaults;
    CHECK(defaults.universe_min == 8);
    CHECK(defaults.universe_max == 16);
    CHECK(defaults.category_prob == 0.5);

    const auto parsed = parse_forge_config_text(
        "# comment\n"
        "universe_min = 9\n"
        "universe_max = 12\n"
        "category_prob = 0.4\n"
        "template_version = v2\n"
        "selection_vocab = a,b,c,d,e\n"
        "transform_vocab = p,q,r,s\n");
    CHECK(parsed.universe_min == 9);
    CHECK(parsed.universe_max == 12);
    CHECK(parsed.category_prob == doctest::Approx(0.4));
    CHECK(parsed.template_version == "v2");
    CHECK(parsed.selection_vocab == std::vector<std::string>{"a", "b", "c", "d", "e"});

    CHECK_THROWS_AS(parse_forge_config_text("mystery = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_forge_config_text("universe_min = soon\n"), ConfigError);
    CHECK_THROWS_AS(parse_forge_config_text("universe_min: 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_forge_config_text("universe_min = 12\nuniverse_max = 9\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_forge_config_text("category_prob = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_forge_config_text("selection_vocab = a,b\n"), ConfigError);
    CHECK_THROWS_AS(parse_forge_config(
                        "/nonexistent/path/metaglyph.cfg"),
                    ConfigError);
}
