#include <cctype>
#include <sstream>

#include "shoq/kb.hpp"

namespace shoq {

namespace {

const std::uint32_t kMaxNumber = 1000000000;  // parse-time overflow guard

bool is_keyword(const std::string& w) {
    static const std::set<std::string> kw = {"top",     "bot",   "not",   "and",   "or",
                                             "some",    "only",  "atleast", "atmost", "one",
                                             "rbox",    "tbox",  "abox",  "sub",   "equiv",
                                             "trans"};
    return kw.count(w) > 0;
}

struct Token {
    enum class Kind { Name, Number, LParen, RParen, Colon, Comma, NotEqual, End } kind;
    std::string text;
    int col = 0;
};

class LineLexer {
public:
    LineLexer(const std::string& line, int line_no) : line_(line), line_no_(line_no) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, int col) const {
        throw ParseError(line_no_, col, msg);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, tok_.col); }

    int line_no() const { return line_no_; }

private:
    void advance() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= line_.size() || line_[pos_] == '#') {
            tok_ = {Token::Kind::End, "", tok_.col};
            return;
        }
        char c = line_[pos_];
        if (c == '(') { tok_ = {Token::Kind::LParen, "(", tok_.col}; ++pos_; return; }
        if (c == ')') { tok_ = {Token::Kind::RParen, ")", tok_.col}; ++pos_; return; }
        if (c == ':') { tok_ = {Token::Kind::Colon, ":", tok_.col}; ++pos_; return; }
        if (c == ',') { tok_ = {Token::Kind::Comma, ",", tok_.col}; ++pos_; return; }
        if (c == '!' && pos_ + 1 < line_.size() && line_[pos_ + 1] == '=') {
            tok_ = {Token::Kind::NotEqual, "!=", tok_.col};
            pos_ += 2;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) ++pos_;
            tok_ = {Token::Kind::Number, line_.substr(start, pos_ - start), tok_.col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < line_.size() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_'))
                ++pos_;
            tok_ = {Token::Kind::Name, line_.substr(start, pos_ - start), tok_.col};
            return;
        }
        throw ParseError(line_no_, tok_.col, std::string("unexpected character '") + c + "'");
    }

    const std::string& line_;
    int line_no_;
    std::size_t pos_ = 0;
    Token tok_;
};

class KbBuilder {
public:
    KnowledgeBase kb;

    void note_individual(const Individual& a) {
        if (seen_inds_.insert(a).second) kb.individuals.push_back(a);
    }
    void note_role(const Role& r) {
        if (seen_roles_.insert(r).second) kb.roles.push_back(r);
    }
    void note_concept_occurrences(const Concept& c) {
        std::set<Individual> inds;
        collect_individuals(c, inds);
        std::set<Role> roles;
        collect_roles(c, roles);
        // Within one concept, first-occurrence order falls back to the
        // canonical name order; occurrence order across lines is positional.
        for (const Individual& a : inds) note_individual(a);
        for (const Role& r : roles) note_role(r);
    }

private:
    std::set<Individual> seen_inds_;
    std::set<Role> seen_roles_;
};

std::string expect_name(LineLexer& lex, const char* what) {
    if (lex.peek().kind != Token::Kind::Name) lex.fail(std::string("expected ") + what);
    Token t = lex.next();
    if (is_keyword(t.text)) lex.fail("'" + t.text + "' is a reserved word", t.col);
    return t.text;
}

void expect_word(LineLexer& lex, const std::string& word) {
    if (lex.peek().kind != Token::Kind::Name || lex.peek().text != word)
        lex.fail("expected '" + word + "'");
    lex.next();
}

std::uint32_t expect_number(LineLexer& lex) {
    if (lex.peek().kind != Token::Kind::Number) lex.fail("expected a nonnegative integer");
    Token t = lex.next();
    unsigned long long v = 0;
    for (char c : t.text) {
        v = v * 10 + static_cast<unsigned long long>(c - '0');
        if (v > kMaxNumber) lex.fail("number out of range", t.col);
    }
    return static_cast<std::uint32_t>(v);
}

// concept := top | bot | NAME | not C | (C and C) | (C or C)
//          | some R C | only R C | atleast N R C | atmost N R C | one a
Concept parse_concept(LineLexer& lex, KbBuilder& b) {
    const Token& t = lex.peek();
    if (t.kind == Token::Kind::LParen) {
        lex.next();
        Concept lhs = parse_concept(lex, b);
        if (lex.peek().kind != Token::Kind::Name ||
            (lex.peek().text != "and" && lex.peek().text != "or"))
            lex.fail("expected 'and' or 'or'");
        std::string op = lex.next().text;
        Concept rhs = parse_concept(lex, b);
        if (lex.peek().kind != Token::Kind::RParen) lex.fail("expected ')'");
        lex.next();
        return op == "and" ? Concept::conj(lhs, rhs) : Concept::disj(lhs, rhs);
    }
    if (t.kind != Token::Kind::Name) lex.fail("expected a concept");
    if (t.text == "top") { lex.next(); return Concept::top(); }
    if (t.text == "bot") { lex.next(); return Concept::bot(); }
    if (t.text == "not") {
        lex.next();
        return Concept::negation(parse_concept(lex, b));
    }
    if (t.text == "some" || t.text == "only") {
        std::string op = lex.next().text;
        Role r{expect_name(lex, "a role name")};
        b.note_role(r);
        Concept sub = parse_concept(lex, b);
        return op == "some" ? Concept::exists(r, sub) : Concept::forall(r, sub);
    }
    if (t.text == "atleast" || t.text == "atmost") {
        std::string op = lex.next().text;
        std::uint32_t n = expect_number(lex);
        Role r{expect_name(lex, "a role name")};
        b.note_role(r);
        Concept sub = parse_concept(lex, b);
        return op == "atleast" ? Concept::at_least(n, r, sub) : Concept::at_most(n, r, sub);
    }
    if (t.text == "one") {
        lex.next();
        Individual a{expect_name(lex, "an individual name")};
        b.note_individual(a);
        return Concept::nominal(a);
    }
    if (is_keyword(t.text)) lex.fail("'" + t.text + "' is a reserved word");
    return Concept::atomic(lex.next().text);
}

void expect_end(LineLexer& lex) {
    if (lex.peek().kind != Token::Kind::End) lex.fail("trailing input");
}

void parse_rbox_line(LineLexer& lex, KbBuilder& b) {
    if (lex.peek().kind == Token::Kind::Name && lex.peek().text == "trans") {
        lex.next();
        Role r{expect_name(lex, "a role name")};
        b.note_role(r);
        expect_end(lex);
        b.kb.rbox_axioms.push_back({RBoxAxiom::Kind::Trans, r, r});
        return;
    }
    Role r{expect_name(lex, "a role name")};
    expect_word(lex, "sub");
    Role s{expect_name(lex, "a role name")};
    expect_end(lex);
    b.note_role(r);
    b.note_role(s);
    b.kb.rbox_axioms.push_back({RBoxAxiom::Kind::Sub, r, s});
}

void parse_tbox_line(LineLexer& lex, KbBuilder& b) {
    Concept lhs = parse_concept(lex, b);
    if (lex.peek().kind != Token::Kind::Name ||
        (lex.peek().text != "sub" && lex.peek().text != "equiv"))
        lex.fail("expected 'sub' or 'equiv'");
    std::string op = lex.next().text;
    Concept rhs = parse_concept(lex, b);
    expect_end(lex);
    b.kb.tbox_axioms.push_back(
        {op == "sub" ? TBoxAxiom::Kind::Sub : TBoxAxiom::Kind::Equiv, lhs, rhs});
}

void parse_abox_line(LineLexer& lex, KbBuilder& b) {
    std::string first = expect_name(lex, "an individual or role name");
    if (lex.peek().kind == Token::Kind::Colon) {
        lex.next();
        Individual a{first};
        b.note_individual(a);
        Concept c = parse_concept(lex, b);
        expect_end(lex);
        b.kb.abox.insert(Formula::instance(a, nnf(c)));
        return;
    }
    if (lex.peek().kind == Token::Kind::LParen) {
        lex.next();
        Individual a{expect_name(lex, "an individual name")};
        if (lex.peek().kind != Token::Kind::Comma) lex.fail("expected ','");
        lex.next();
        Individual c{expect_name(lex, "an individual name")};
        if (lex.peek().kind != Token::Kind::RParen) lex.fail("expected ')'");
        lex.next();
        expect_end(lex);
        Role r{first};
        b.note_role(r);
        b.note_individual(a);
        b.note_individual(c);
        b.kb.abox.insert(Formula::role(r, a, c));
        return;
    }
    if (lex.peek().kind == Token::Kind::NotEqual) {
        lex.next();
        Individual a{first};
        Individual c{expect_name(lex, "an individual name")};
        expect_end(lex);
        b.note_individual(a);
        b.note_individual(c);
        b.kb.abox.insert(Formula::neq(a, c));
        return;
    }
    lex.fail("expected ':', '(' or '!='");
}

}  // namespace

KnowledgeBase parse_kb(const std::string& text) {
    KbBuilder b;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        LineLexer lex(line, line_no);
        if (lex.peek().kind == Token::Kind::End) continue;
        if (lex.peek().kind != Token::Kind::Name) lex.fail("expected 'rbox', 'tbox' or 'abox'");
        std::string head = lex.next().text;
        if (head == "rbox")
            parse_rbox_line(lex, b);
        else if (head == "tbox")
            parse_tbox_line(lex, b);
        else if (head == "abox")
            parse_abox_line(lex, b);
        else
            lex.fail("expected 'rbox', 'tbox' or 'abox'");
    }

    KnowledgeBase kb = std::move(b.kb);

    // Duplicate declarations are idempotent, not errors.
    std::sort(kb.rbox_axioms.begin(), kb.rbox_axioms.end());
    kb.rbox_axioms.erase(std::unique(kb.rbox_axioms.begin(), kb.rbox_axioms.end()),
                         kb.rbox_axioms.end());

    // Encode TBox axioms as global assumptions: C sub D -> nnf(¬C or D),
    // C equiv D -> the conjunction of both directions.
    for (const TBoxAxiom& ax : kb.tbox_axioms) {
        Concept fwd = Concept::disj(Concept::negation(ax.lhs), ax.rhs);
        if (ax.kind == TBoxAxiom::Kind::Sub) {
            kb.tbox.push_back(nnf(fwd));
        } else {
            Concept bwd = Concept::disj(Concept::negation(ax.rhs), ax.lhs);
            kb.tbox.push_back(nnf(Concept::conj(fwd, bwd)));
        }
    }
    std::sort(kb.tbox.begin(), kb.tbox.end());
    kb.tbox.erase(std::unique(kb.tbox.begin(), kb.tbox.end()), kb.tbox.end());

    std::set<Role> mentioned(kb.roles.begin(), kb.roles.end());
    kb.rbox = RBoxClosure::build(kb.rbox_axioms, mentioned);
    return kb;
}

std::string pretty_print(const KnowledgeBase& kb) {
    std::string out;
    for (const RBoxAxiom& ax : kb.rbox_axioms) {
        if (ax.kind == RBoxAxiom::Kind::Sub)
            out += "rbox " + ax.sub.name + " sub " + ax.super.name + "\n";
        else
            out += "rbox trans " + ax.sub.name + "\n";
    }
    for (const TBoxAxiom& ax : kb.tbox_axioms) {
        out += "tbox " + to_string(ax.lhs) +
               (ax.kind == TBoxAxiom::Kind::Sub ? " sub " : " equiv ") + to_string(ax.rhs) + "\n";
    }
    for (const Formula& f : kb.abox) {
        switch (f.kind()) {
            case FormulaKind::Instance:
                out += "abox " + f.subject().name + " : " + to_string(f.concept_part()) + "\n";
                break;
            case FormulaKind::RoleAssertion:
                out += "abox " + f.role_part().name + "(" + f.first().name + ", " +
                       f.second().name + ")\n";
                break;
            case FormulaKind::NotEq:
                out += "abox " + f.first().name + " != " + f.second().name + "\n";
                break;
            default:
                throw ValidationError("ABox contains a formula outside the input grammar: " +
                                      to_string(f));
        }
    }
    return out;
}

}  // namespace shoq
