#include <doctest.h>

#include <map>
#include <sstream>
#include <string>

#include "metaglyph/errors.hpp"
#include "metaglyph/glyph/ast.hpp"
#include "metaglyph/glyph/control.hpp"
#include "metaglyph/glyph/operators.hpp"
#include "metaglyph/glyph/parser.hpp"
#include "metaglyph/glyph/printer.hpp"
#include "metaglyph/util/rng.hpp"
#include "support/generators.hpp"

using namespace metaglyph;
using namespace metaglyph::glyph;

namespace {

// Independent oracle for operators_in: histogram of operator glyphs in
// the canonical text, minus the structural | delimiter.
std::map<Op, int> glyph_histogram(const std::string& text) {
    std::map<Op, int> counts;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if ((lead & 0xE0) == 0xC0) len = 2;
        else if ((lead & 0xF0) == 0xE0) len = 3;
        else if ((lead & 0xF8) == 0xF0) len = 4;
        if (auto op = op_from_glyph(std::string_view(text).substr(i, len))) {
            if (*op != Op::Restrict) ++counts[*op];
        }
        i += len;
    }
    return counts;
}

int whitespace_tokens(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    int n = 0;
    while (in >> tok) ++n;
    return n;
}

} // namespace

TEST_CASE("operator inventory lists 13 operators with 6 core") {
    const auto& table = operator_table();
    CHECK(table.size() == 13);
    int core = 0;
    for (const auto& info : table) {
        if (info.core) ++core;
        CHECK(op_from_glyph(info.glyph) == info.op);
        CHECK(op_from_name(info.name) == info.op);
    }
    CHECK(core == 6);
    CHECK(glyph_of(Op::MemberOf) == "∈");
    CHECK(glyph_of(Op::Implication) == "⇒");
    CHECK(glyph_of(Op::Restrict) == "|");
    CHECK(operator_info(Op::MemberOf).core);
    CHECK(operator_info(Op::Negation).core);
    CHECK(operator_info(Op::Intersect).core);
    CHECK(operator_info(Op::Arrow).core);
    CHECK(operator_info(Op::Implication).core);
    CHECK(operator_info(Op::Compose).core);
    CHECK_FALSE(operator_info(Op::Union).core);
    CHECK_FALSE(operator_info(Op::ForAll).core);
}

TEST_CASE("parse: selection instruction with negated membership") {
    const auto instr = parse_instruction("items | ∈(mammal) ∩ ¬(bird) ⇒ select");
    CHECK(instr.anchor.name == "items");
    REQUIRE(instr.constraint != nullptr);
    const auto expected = make_and({make_pred(Op::MemberOf, "mammal"),
                                    make_not(make_pred(Op::MemberOf, "bird"))});
    CHECK(expr_equal(instr.constraint, expected));
    CHECK(task_equal(instr.task, make_task({ActionClause{"select", {}}})));
    CHECK(instr.arrow == Op::Implication);
}

TEST_CASE("parse: anchor-only instruction has absent constraint") {
    const auto instr = parse_instruction("items ⇒ select");
    CHECK(instr.anchor.name == "items");
    CHECK(instr.constraint == nullptr);
    CHECK(task_equal(instr.task, make_task({ActionClause{"select", {}}})));
}

TEST_CASE("parse: grouping separates the two precedence readings") {
    const auto left = parse_instruction("items | ( ∈(A) ∪ ∈(B) ) ∩ ¬(C) ⇒ select");
    const auto right = parse_instruction("items | ∈(A) ∪ ( ∈(B) ∩ ¬(C) ) ⇒ select");

    const auto left_expected =
        make_and({make_or({make_pred(Op::MemberOf, "A"), make_pred(Op::MemberOf, "B")}),
                  make_not(make_pred(Op::MemberOf, "C"))});
    const auto right_expected =
        make_or({make_pred(Op::MemberOf, "A"),
                 make_and({make_pred(Op::MemberOf, "B"),
                           make_not(make_pred(Op::MemberOf, "C"))})});

    CHECK(expr_equal(left.constraint, left_expected));
    CHECK(expr_equal(right.constraint, right_expected));
    CHECK_FALSE(expr_equal(left.constraint, right.constraint));
}

TEST_CASE("parse: unspaced parentheses are accepted") {
    const auto a = parse_instruction("items | (∈(A) ∪ ∈(B)) ∩ ¬(C) ⇒ select");
    const auto b = parse_instruction("items | ( ∈(A) ∪ ∈(B) ) ∩ ¬(C) ⇒ select");
    CHECK(instruction_equal(a, b));
}

TEST_CASE("parse: ∩ binds tighter than ∪ without parentheses") {
    const auto expr = parse_expression("∈(A) ∪ ∈(B) ∩ ¬(C)");
    const auto expected =
        make_or({make_pred(Op::MemberOf, "A"),
                 make_and({make_pred(Op::MemberOf, "B"),
                           make_not(make_pred(Op::MemberOf, "C"))})});
    CHECK(expr_equal(expr, expected));
}

TEST_CASE("print: canonical text for the selection example") {
    Instruction instr;
    instr.anchor.name = "items";
    instr.constraint = make_and({make_pred(Op::MemberOf, "mammal"),
                                 make_not(make_pred(Op::MemberOf, "bird"))});
    instr.task = make_task({ActionClause{"select", {}}});
    CHECK(print_instruction(instr) == "items | ∈(mammal) ∩ ¬(bird) ⇒ select");
}

TEST_CASE("print: anchor-only instruction") {
    Instruction instr;
    instr.anchor.name = "items";
    instr.task = make_task({ActionClause{"select", {}}});
    CHECK(print_instruction(instr) == "items ⇒ select");
}

TEST_CASE("print: transformation instruction with rules and compose chain") {
    const std::string text =
        "items | ( ∈(employee) ⇒ label=internal ) ∩ ( ∈(admin) ⇒ access=full ) "
        "⇒ lowercase(name) ∘ sort(name)";
    const auto instr = parse_instruction(text);
    REQUIRE(instr.constraint != nullptr);
    const auto* conj = std::get_if<And>(&instr.constraint->node);
    REQUIRE(conj != nullptr);
    REQUIRE(conj->conjuncts.size() == 2);
    CHECK(std::holds_alternative<Implies>(conj->conjuncts[0]->node));
    CHECK(std::holds_alternative<Implies>(conj->conjuncts[1]->node));
    const auto* chain = std::get_if<ComposeChain>(&instr.task);
    REQUIRE(chain != nullptr);
    CHECK(chain->steps.size() == 2);
    CHECK(print_instruction(instr) == text);
}

TEST_CASE("parse canonicalizes ¬(∈(C)) to membership negation") {
    const auto sugar = parse_expression("¬(bird)");
    const auto full = parse_expression("¬(∈(bird))");
    CHECK(expr_equal(sugar, full));
    CHECK(print_expr(sugar) == "¬(bird)");
    CHECK(print_expr(full) == "¬(bird)");
}

TEST_CASE("∉ is a distinct predicate, not sugar for ¬(∈)") {
    const auto neg_pred = parse_expression("∉(bird)");
    const auto not_member = parse_expression("¬(bird)");
    CHECK(std::holds_alternative<Pred>(neg_pred->node));
    CHECK(std::holds_alternative<Not>(not_member->node));
    CHECK_FALSE(expr_equal(neg_pred, not_member));
    CHECK(print_expr(neg_pred) == "∉(bird)");
}

TEST_CASE("double negation is normalized away") {
    const auto expr = parse_expression("¬ ( ¬ ( ∈(a) ) )");
    CHECK(expr_equal(expr, make_pred(Op::MemberOf, "a")));
    CHECK(expr_equal(make_not(make_not(make_pred(Op::MemberOf, "a"))),
                     make_pred(Op::MemberOf, "a")));
}

TEST_CASE("parse: alternate task arrow → is recorded") {
    const auto instr = parse_instruction("items → select");
    CHECK(instr.arrow == Op::Arrow);
    CHECK(print_instruction(instr) == "items → select");
}

TEST_CASE("parse: extended operators build the expected nodes") {
    const auto q = parse_expression("∀ x ∈(items) ( ∈(mammal) )");
    const auto* quant = std::get_if<Quantified>(&q->node);
    REQUIRE(quant != nullptr);
    CHECK(quant->quantifier == Op::ForAll);
    CHECK(quant->variable == "x");
    CHECK(quant->domain == "items");

    const auto m = parse_expression("x ↦ lowercase(name)");
    const auto* mapped = std::get_if<MapTo>(&m->node);
    REQUIRE(mapped != nullptr);
    CHECK(mapped->binding == "x");

    const auto s = parse_expression("⊆(mammal)");
    const auto* sub = std::get_if<Pred>(&s->node);
    REQUIRE(sub != nullptr);
    CHECK(sub->op == Op::SubsetOf);

    const auto r = parse_expression("items | ∈(mammal)");
    const auto* restict = std::get_if<RestrictExpr>(&r->node);
    REQUIRE(restict != nullptr);
    CHECK(restict->anchor.name == "items");
}

TEST_CASE("syntax errors carry byte offsets") {
    CHECK_THROWS_AS(parse_instruction(""), SyntaxError);
    CHECK_THROWS_AS(parse_instruction("items"), SyntaxError);
    CHECK_THROWS_AS(parse_instruction("items | ∈(a)"), SyntaxError);
    CHECK_THROWS_AS(parse_instruction("items | ∈(a ⇒ select"), SyntaxError);
    CHECK_THROWS_AS(parse_instruction("items | ∈(a) ⇒"), SyntaxError);
    CHECK_THROWS_AS(parse_instruction("items | ∈(a) ⇒ select extra"), SyntaxError);

    try {
        parse_instruction("items ✦ select");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 6);
        CHECK(std::string(e.what()).find("byte 6") != std::string::npos);
    }

    try {
        parse_instruction("items | ∈(a ⇒ select");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 14); // points at ⇒ where ')' was expected
    }
}

TEST_CASE("unparenthesized rule inside constraint is rejected") {
    CHECK_THROWS_AS(parse_instruction("items | ∈(a) ⇒ x=1 ⇒ select"), SyntaxError);
}

TEST_CASE("operators_in: worked multiset example") {
    const auto instr = parse_instruction("items | ∈(mammal) ∩ ∈(pet) ∩ ¬(bird) ⇒ select");
    const auto counts = operators_in(instr);
    const std::map<Op, int> expected = {
        {Op::MemberOf, 2}, {Op::Intersect, 2}, {Op::Negation, 1}, {Op::Implication, 1}};
    CHECK(counts == expected);
}

TEST_CASE("operators_in: anchor-only instruction counts just the arrow") {
    const auto instr = parse_instruction("items ⇒ select");
    const std::map<Op, int> expected = {{Op::Implication, 1}};
    CHECK(operators_in(instr) == expected);
}

TEST_CASE("operators_in matches a glyph scan of the canonical text") {
    util::Rng rng(0x5eed0001);
    for (int i = 0; i < 500; ++i) {
        const auto instr = testsupport::random_instruction(rng, 3);
        const auto text = print_instruction(instr);
        CHECK(operators_in(instr) == glyph_histogram(text));
    }
}

TEST_CASE("instruction round-trip: parse(print(i)) == i") {
    util::Rng rng(0x5eed0002);
    for (int i = 0; i < 2000; ++i) {
        const auto instr = testsupport::random_instruction(rng, 4);
        const auto text = print_instruction(instr);
        CAPTURE(text);
        Instruction reparsed;
        REQUIRE_NOTHROW(reparsed = parse_instruction(text));
        CHECK(instruction_equal(instr, reparsed));
        CHECK(print_instruction(reparsed) == text);
    }
}

TEST_CASE("expression round-trip over the full inventory") {
    util::Rng rng(0x5eed0003);
    for (int i = 0; i < 2000; ++i) {
        const auto expr = testsupport::random_expr(rng, 4);
        const auto text = print_expr(expr);
        CAPTURE(text);
        ExprPtr reparsed;
        REQUIRE_NOTHROW(reparsed = parse_expression(text));
        CHECK(expr_equal(expr, reparsed));
        CHECK(print_expr(reparsed) == text);
    }
}

TEST_CASE("to_control: worked examples under the standard alphabet") {
    CHECK(to_control("items | ∈(mammal) ∩ ¬(bird) ⇒ select") ==
          "items ⧆ ⊙(mammal) ⊕ ⊗(bird) ⊛ select");
    CHECK(to_control("items ⇒ select") == "items ⊛ select");
}

TEST_CASE("to_control: purity and token parity on random instructions") {
    util::Rng rng(0x5eed0004);
    for (int i = 0; i < 500; ++i) {
        const auto instr = testsupport::random_instruction(rng, 3);
        const auto mg = print_instruction(instr);
        const auto ctrl = to_control(mg);
        CHECK_FALSE(contains_operator_glyph(ctrl));
        CHECK(whitespace_tokens(ctrl) == whitespace_tokens(mg));
    }
}

TEST_CASE("to_control leaves labels and data intact") {
    CHECK(to_control("plain words with no glyphs") == "plain words with no glyphs");
    const auto ctrl = to_control("items | ∈(mammal) ⇒ select");
    CHECK(ctrl.find("mammal") != std::string::npos);
    CHECK(ctrl.find("items") != std::string::npos);
    CHECK(ctrl.find("select") != std::string::npos);
}

TEST_CASE("ControlAlphabet rejects non-bijections") {
    auto mapping = ControlAlphabet::standard().mapping();

    auto missing = mapping;
    missing.erase(Op::Restrict);
    CHECK_THROWS_AS(ControlAlphabet{missing}, ConfigError);

    auto collision = mapping;
    collision[Op::MemberOf] = collision[Op::Intersect];
    CHECK_THROWS_AS(ControlAlphabet{collision}, ConfigError);

    auto overlap = mapping;
    overlap[Op::MemberOf] = "∩"; // ∩ is an operator glyph
    CHECK_THROWS_AS(ControlAlphabet{overlap}, ConfigError);

    CHECK_NOTHROW(ControlAlphabet{mapping});
}

TEST_CASE("standard control alphabet pins the published substitutions") {
    const auto& table = ControlAlphabet::standard();
    CHECK(table.substitute(Op::MemberOf) == "⊙");
    CHECK(table.substitute(Op::Intersect) == "⊕");
    CHECK(table.substitute(Op::Negation) == "⊗");
    CHECK(table.substitute(Op::Implication) == "⊛");
}
