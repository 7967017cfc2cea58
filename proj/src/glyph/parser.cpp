#include "metaglyph/glyph/parser.hpp"

#include <cctype>
#include <set>

#include "metaglyph/errors.hpp"
#include "metaglyph/glyph/operators.hpp"

namespace metaglyph::glyph {

namespace {

bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '=' || c == '-';
}

struct Token {
    enum class Kind { Glyph, LParen, RParen, Comma, Label, End };
    Kind kind;
    Op op = Op::MemberOf; // valid when kind == Glyph
    std::string text;     // valid when kind == Label
    std::size_t offset = 0;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '(') {
            tokens.push_back({Token::Kind::LParen, {}, {}, i});
            ++i;
            continue;
        }
        if (c == ')') {
            tokens.push_back({Token::Kind::RParen, {}, {}, i});
            ++i;
            continue;
        }
        if (c == ',') {
            tokens.push_back({Token::Kind::Comma, {}, {}, i});
            ++i;
            continue;
        }
        if (is_label_char(c)) {
            std::size_t start = i;
            while (i < text.size() && is_label_char(text[i])) ++i;
            tokens.push_back(
                {Token::Kind::Label, {}, std::string(text.substr(start, i - start)), start});
            continue;
        }
        if (c == '|') {
            tokens.push_back({Token::Kind::Glyph, Op::Restrict, {}, i});
            ++i;
            continue;
        }
        // Multi-byte UTF-8 sequence: decode its length and match against
        // the operator inventory.
        const auto lead = static_cast<unsigned char>(c);
        std::size_t len = 0;
        if ((lead & 0x80) == 0x00) len = 1;
        else if ((lead & 0xE0) == 0xC0) len = 2;
        else if ((lead & 0xF0) == 0xE0) len = 3;
        else if ((lead & 0xF8) == 0xF0) len = 4;
        if (len == 0 || i + len > text.size()) {
            throw SyntaxError("malformed UTF-8 sequence", i);
        }
        const auto seq = text.substr(i, len);
        if (auto op = op_from_glyph(seq)) {
            tokens.push_back({Token::Kind::Glyph, *op, {}, i});
            i += len;
            continue;
        }
        throw SyntaxError("unknown glyph '" + std::string(seq) + "'", i);
    }
    tokens.push_back({Token::Kind::End, {}, {}, text.size()});
    return tokens;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    Instruction instruction() {
        Instruction instr;
        instr.anchor.name = expect_label("input anchor");
        if (at_glyph(Op::Restrict)) {
            advance();
            instr.constraint = or_expr();
        }
        if (at_glyph(Op::Implication) || at_glyph(Op::Arrow)) {
            instr.arrow = peek().op;
            advance();
        } else {
            throw SyntaxError("missing task clause", peek().offset);
        }
        instr.task = task();
        expect_end();
        return instr;
    }

    ExprPtr expression() {
        ExprPtr e = group_inner();
        expect_end();
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t idx = pos_ + ahead;
        return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
    }
    void advance() { ++pos_; }
    bool at_glyph(Op op) const {
        return peek().kind == Token::Kind::Glyph && peek().op == op;
    }

    std::string expect_label(const char* what) {
        if (peek().kind != Token::Kind::Label) {
            throw SyntaxError(std::string("expected ") + what, peek().offset);
        }
        std::string text = peek().text;
        advance();
        return text;
    }

    void expect(Token::Kind kind, const char* what) {
        if (peek().kind != kind) {
            throw SyntaxError(std::string("expected ") + what, peek().offset);
        }
        advance();
    }

    void expect_end() {
        if (peek().kind != Token::Kind::End) {
            throw SyntaxError("unexpected trailing input", peek().offset);
        }
    }

    // verb | verb(arg,...) | key=value
    ActionClause action() {
        const auto offset = peek().offset;
        std::string verb = expect_label("action verb");
        ActionClause clause;
        if (peek().kind == Token::Kind::LParen) {
            if (verb.find('=') != std::string::npos) {
                throw SyntaxError("assignment cannot take an argument list", offset);
            }
            clause.verb = std::move(verb);
            advance();
            while (true) {
                clause.args.push_back(parse_arg());
                if (peek().kind == Token::Kind::Comma) {
                    advance();
                    continue;
                }
                break;
            }
            expect(Token::Kind::RParen, "')' after arguments");
        } else if (auto eq = verb.find('='); eq != std::string::npos) {
            if (eq == 0 || eq + 1 == verb.size()) {
                throw SyntaxError("malformed assignment", offset);
            }
            clause.verb = "set";
            clause.args.push_back(Arg{verb.substr(0, eq), verb.substr(eq + 1)});
        } else {
            clause.verb = std::move(verb);
        }
        check_unique_keys(clause, offset);
        return clause;
    }

    Arg parse_arg() {
        std::string text = expect_label("argument");
        if (auto eq = text.find('='); eq != std::string::npos && eq > 0 && eq + 1 < text.size()) {
            return Arg{text.substr(0, eq), text.substr(eq + 1)};
        }
        return Arg{std::move(text), std::nullopt};
    }

    void check_unique_keys(const ActionClause& clause, std::size_t offset) {
        std::set<std::string> keys;
        for (const auto& arg : clause.args) {
            if (!keys.insert(arg.key).second) {
                throw SyntaxError("duplicate argument key '" + arg.key + "'", offset);
            }
        }
    }

    Task task() {
        std::vector<ActionClause> steps{action()};
        while (at_glyph(Op::Compose)) {
            advance();
            steps.push_back(action());
        }
        return make_task(std::move(steps));
    }

    ExprPtr or_expr() {
        std::vector<ExprPtr> parts{and_expr()};
        while (at_glyph(Op::Union)) {
            advance();
            parts.push_back(and_expr());
        }
        return make_or(std::move(parts));
    }

    ExprPtr and_expr() {
        std::vector<ExprPtr> parts{unary()};
        while (at_glyph(Op::Intersect)) {
            advance();
            parts.push_back(unary());
        }
        return make_and(std::move(parts));
    }

    ExprPtr unary() {
        if (at_glyph(Op::Negation)) {
            advance();
            return make_not(unary());
        }
        return primary();
    }

    ExprPtr primary() {
        const Token& tok = peek();
        if (tok.kind == Token::Kind::Glyph) {
            switch (tok.op) {
                case Op::MemberOf:
                case Op::NotMemberOf:
                case Op::SubsetOf: {
                    const Op op = tok.op;
                    advance();
                    expect(Token::Kind::LParen, "'(' after predicate glyph");
                    std::string category = expect_label("category label");
                    expect(Token::Kind::RParen, "')' after category label");
                    return make_pred(op, std::move(category));
                }
                case Op::ForAll:
                case Op::Exists:
                    return quantified();
                default:
                    throw SyntaxError("operator glyph in operand position", tok.offset);
            }
        }
        if (tok.kind == Token::Kind::LParen) {
            advance();
            ExprPtr e = group_inner();
            expect(Token::Kind::RParen, "closing ')'");
            return e;
        }
        if (tok.kind == Token::Kind::Label) {
            std::string label = tok.text;
            advance();
            if (at_glyph(Op::MapsTo)) {
                advance();
                return make_map_to(std::move(label), action());
            }
            // Bare label in predicate position is membership shorthand.
            return make_pred(Op::MemberOf, std::move(label));
        }
        throw SyntaxError("expected expression", tok.offset);
    }

    ExprPtr quantified() {
        const Op quantifier = peek().op;
        advance();
        std::string variable = expect_label("quantifier variable");
        if (!at_glyph(Op::MemberOf)) {
            throw SyntaxError("expected membership glyph after quantifier variable",
                              peek().offset);
        }
        advance();
        expect(Token::Kind::LParen, "'(' before quantifier domain");
        std::string domain = expect_label("quantifier domain");
        expect(Token::Kind::RParen, "')' after quantifier domain");
        expect(Token::Kind::LParen, "'(' before quantifier body");
        ExprPtr body = group_inner();
        expect(Token::Kind::RParen, "')' after quantifier body");
        return make_quantified(quantifier, std::move(variable), std::move(domain),
                               std::move(body));
    }

    // Full expression grammar inside parentheses (and at expression top
    // level): restriction, rule, or plain constraint. `|` binds tighter
    // than `⇒`, so "a | c ⇒ act" is a rule over the restriction; nested
    // restrictions and rule bodies need their own parentheses.
    ExprPtr group_inner() {
        ExprPtr e;
        if (peek().kind == Token::Kind::Label && peek(1).kind == Token::Kind::Glyph &&
            peek(1).op == Op::Restrict) {
            Anchor anchor{peek().text};
            advance();
            advance();
            e = make_restrict(std::move(anchor), or_expr());
        } else {
            e = or_expr();
        }
        if (at_glyph(Op::Implication)) {
            advance();
            return make_implies(std::move(e), action());
        }
        return e;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

Instruction parse_instruction(std::string_view text) {
    if (text.empty()) throw SyntaxError("empty input", 0);
    return Parser(text).instruction();
}

ExprPtr parse_expression(std::string_view text) {
    if (text.empty()) throw SyntaxError("empty input", 0);
    return Parser(text).expression();
}

} // namespace metaglyph::glyph
