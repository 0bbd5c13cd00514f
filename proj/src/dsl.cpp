#include "qpk/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "qpk/convert.hpp"

namespace qpk {

namespace {

std::string where(Span at) { return std::to_string(at.line) + ":" + std::to_string(at.col); }

}  // namespace

ParseError::ParseError(Span at_, std::string expected_, const std::string& found)
    : Error(ErrorKind::ParseError, where(at_) + ": expected " + expected_ + ", found " + found),
      at(at_),
      expected(std::move(expected_)) {}

const char* to_string(Block::Kind k) {
    switch (k) {
        case Block::Poset: return "poset";
        case Block::Frame: return "frame";
        case Block::Pi02: return "pi02";
        case Block::Point: return "point";
        case Block::Expr: return "expr";
        case Block::Goal: return "goal";
    }
    return "?";
}

// --------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
    enum Kind { Ident, Int, Sym, End } kind = End;
    std::string text;
    Index value = 0;
    Span at;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Token::End: return "end of input";
        case Token::Int: return "number " + t.text;
        default: return "'" + t.text + "'";
    }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    Span at;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++at.line;
                at.col = 1;
            } else {
                ++at.col;
            }
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.at = at;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            t.kind = Token::Ident;
            t.text = s.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            t.kind = Token::Int;
            t.text = s.substr(i, j - i);
            if (t.text.size() > 18) throw ParseError(at, "a number below 10^18", t.text);
            t.value = std::stoull(t.text);
            advance(j - i);
        } else {
            const std::string two = s.substr(i, 2);
            t.kind = Token::Sym;
            if (two == "<=" || two == "=>") {
                t.text = two;
            } else if (std::string("{}();,<=&|").find(c) != std::string::npos) {
                t.text = std::string(1, c);
            } else {
                std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "byte " + std::to_string(static_cast<unsigned char>(c));
                throw ParseError(at, "a token", shown);
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.at = at;
    out.push_back(end);
    return out;
}

// --------------------------------------------------------------------------
// Parser

constexpr Index kMaxPointIndex = 4096;

class Parser {
public:
    explicit Parser(std::vector<Token> ts) : ts_(std::move(ts)) {}

    Document document() {
        Document doc;
        std::set<std::string> names;
        while (peek().kind != Token::End) {
            Block b = block();
            if (!names.insert(b.name).second) throw ParseError(b.at, "a new block name", "'" + b.name + "' again");
            doc.blocks.push_back(std::move(b));
        }
        return doc;
    }

    ExprAst expr() {
        ExprAst first = term();
        if (!is_sym("|")) return first;
        ExprAst e;
        e.kind = ExprAst::Or;
        e.at = first.at;
        e.kids.push_back(std::move(first));
        while (accept_sym("|")) e.kids.push_back(term());
        return e;
    }

    const Token& peek() const { return ts_[pos_]; }
    bool is_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
    bool accept_sym(const char* s) {
        if (!is_sym(s)) return false;
        ++pos_;
        return true;
    }
    void expect_sym(const char* s) {
        if (!accept_sym(s)) fail(std::string("'") + s + "'");
    }
    [[noreturn]] void fail(const std::string& expected) const { throw ParseError(peek().at, expected, describe(peek())); }

private:
    std::vector<Token> ts_;
    std::size_t pos_ = 0;

    bool is_word(const char* w) const { return peek().kind == Token::Ident && peek().text == w; }
    bool accept_word(const char* w) {
        if (!is_word(w)) return false;
        ++pos_;
        return true;
    }
    Token ident(const char* what) {
        if (peek().kind != Token::Ident) fail(what);
        return ts_[pos_++];
    }
    Token integer(const char* what) {
        if (peek().kind != Token::Int) fail(what);
        return ts_[pos_++];
    }

    Block block() {
        static const std::map<std::string, Block::Kind> kinds = {
            {"poset", Block::Poset}, {"frame", Block::Frame}, {"pi02", Block::Pi02},
            {"point", Block::Point}, {"expr", Block::Expr},   {"goal", Block::Goal},
        };
        if (peek().kind != Token::Ident || !kinds.count(peek().text))
            fail("a block kind (poset, frame, pi02, point, expr, goal)");
        Block b;
        b.kind = kinds.at(ts_[pos_++].text);
        const Token name = ident("a block name");
        b.name = name.text;
        b.at = name.at;
        expect_sym("{");
        switch (b.kind) {
            case Block::Poset: poset_items(b); break;
            case Block::Frame: frame_items(b); break;
            case Block::Pi02: pi02_items(b); break;
            case Block::Point: point_items(b); break;
            case Block::Expr:
                b.expr = expr();
                expect_sym(";");
                break;
            case Block::Goal: goal_items(b); break;
        }
        expect_sym("}");
        return b;
    }

    /// `builtin name(args);` as the only item of a block.
    bool builtin_item(Block& b) {
        if (!is_word("builtin")) return false;
        const Span at = peek().at;
        ++pos_;
        if (b.builtin) throw ParseError(at, "a single builtin per block", "a second one");
        BuiltinRef r;
        const Token name = ident("a builtin name");
        r.name = name.text;
        r.at = name.at;
        expect_sym("(");
        if (!is_sym(")")) {
            do {
                if (peek().kind == Token::Int)
                    r.args.emplace_back(ts_[pos_++].value);
                else
                    r.args.emplace_back(ident("a number or block name").text);
            } while (accept_sym(","));
        }
        expect_sym(")");
        expect_sym(";");
        b.builtin = std::move(r);
        return true;
    }

    void no_mixing(const Block& b, Span at) {
        if (b.builtin) throw ParseError(at, "'}' after a builtin item", "further items");
    }

    void poset_items(Block& b) {
        std::set<std::string> seen;
        while (!is_sym("}")) {
            const Span at = peek().at;
            if (builtin_item(b)) {
                if (!b.poset.elems.empty() || !b.poset.order.empty())
                    throw ParseError(at, "a builtin as the only item", "builtin after elements");
                continue;
            }
            no_mixing(b, at);
            if (accept_word("elem")) {
                do {
                    const Token t = ident("an element name");
                    if (!seen.insert(t.text).second) throw ParseError(t.at, "a new element name", "'" + t.text + "' again");
                    b.poset.elems.push_back(t.text);
                } while (peek().kind == Token::Ident);
                expect_sym(";");
            } else if (accept_word("order")) {
                Token lo = ident("an element name");
                if (!seen.count(lo.text)) throw ParseError(lo.at, "a declared element", "'" + lo.text + "'");
                if (!is_sym("<")) fail("'<'");
                while (accept_sym("<")) {
                    const Token hi = ident("an element name");
                    if (!seen.count(hi.text)) throw ParseError(hi.at, "a declared element", "'" + hi.text + "'");
                    b.poset.order.emplace_back(lo.text, hi.text);
                    b.poset.order_at.push_back(lo.at);
                    lo = hi;
                }
                expect_sym(";");
            } else {
                fail("'elem', 'order', 'builtin' or '}'");
            }
        }
    }

    void frame_items(Block& b) {
        std::set<std::string> seen;
        while (!is_sym("}")) {
            if (accept_word("gen")) {
                do {
                    const Token t = ident("a generator name");
                    if (t.text == "top" || t.text == "bot")
                        throw ParseError(t.at, "a generator name", "reserved word '" + t.text + "'");
                    if (!seen.insert(t.text).second) throw ParseError(t.at, "a new generator name", "'" + t.text + "' again");
                    if (b.frame.gens.size() == 63) throw ParseError(t.at, "at most 63 generators", "'" + t.text + "'");
                    b.frame.gens.push_back(t.text);
                } while (peek().kind == Token::Ident);
                expect_sym(";");
            } else if (accept_word("rel")) {
                ExprAst u = expr();
                check_names(u, seen);
                expect_sym("=>");
                ExprAst v = expr();
                check_names(v, seen);
                expect_sym(";");
                b.frame.rels.emplace_back(std::move(u), std::move(v));
            } else {
                fail("'gen', 'rel' or '}'");
            }
        }
    }

    void check_names(const ExprAst& e, const std::set<std::string>& gens) {
        if (e.kind == ExprAst::Name && !gens.count(e.name))
            throw ParseError(e.at, "a declared generator", "'" + e.name + "'");
        for (const auto& k : e.kids) check_names(k, gens);
    }

    std::vector<FinSet> set_list() {
        expect_sym("{");
        std::vector<FinSet> out;
        while (accept_sym("{")) {
            std::vector<Index> xs;
            if (!is_sym("}")) {
                do xs.push_back(integer("a number").value);
                while (accept_sym(","));
            }
            expect_sym("}");
            out.push_back(FinSet::from(std::move(xs)));
        }
        expect_sym("}");
        return out;
    }

    void pi02_items(Block& b) {
        while (!is_sym("}")) {
            const Span at = peek().at;
            if (builtin_item(b)) {
                if (!b.pi02.pairs.empty()) throw ParseError(at, "a builtin as the only item", "builtin after pairs");
                continue;
            }
            no_mixing(b, at);
            if (!accept_word("pair")) fail("'pair', 'builtin' or '}'");
            PairAst p;
            if (!accept_word("open")) fail("'open'");
            p.open = set_list();
            if (!accept_word("coA")) fail("'coA'");
            if (!accept_word("open")) fail("'open'");
            p.coA = set_list();
            if (accept_word("level")) p.level = integer("a level").value;
            expect_sym(";");
            b.pi02.pairs.push_back(std::move(p));
        }
    }

    std::vector<bool> bits() {
        std::vector<bool> out;
        while (peek().kind == Token::Int) {
            const Token t = ts_[pos_++];
            if (t.value > 1) throw ParseError(t.at, "a bit 0 or 1", t.text);
            if (out.size() >= kMaxPointIndex) throw ParseError(t.at, "at most 4096 bits", "more");
            out.push_back(t.value == 1);
        }
        return out;
    }

    void point_items(Block& b) {
        bool cycle_given = false;
        while (!is_sym("}")) {
            if (accept_word("set")) {
                while (peek().kind == Token::Int) {
                    const Token t = ts_[pos_++];
                    if (t.value >= kMaxPointIndex) throw ParseError(t.at, "an element below 4096", t.text);
                    if (b.point.prefix.size() <= t.value) b.point.prefix.resize(t.value + 1, false);
                    b.point.prefix[t.value] = true;
                }
                expect_sym(";");
            } else if (accept_word("prefix")) {
                auto p = bits();
                if (p.size() > b.point.prefix.size()) b.point.prefix.resize(p.size(), false);
                for (std::size_t i = 0; i < p.size(); ++i) b.point.prefix[i] = b.point.prefix[i] || p[i];
                expect_sym(";");
            } else if (accept_word("cycle")) {
                const Span at = peek().at;
                auto c = bits();
                if (c.empty()) throw ParseError(at, "at least one bit", describe(peek()));
                if (cycle_given) throw ParseError(at, "a single cycle", "a second one");
                cycle_given = true;
                b.point.cycle = std::move(c);
                expect_sym(";");
            } else if (accept_word("filter")) {
                b.point.poset = ident("a poset block name").text;
                do b.point.chain.push_back(ident("an element label").text);
                while (peek().kind == Token::Ident);
                expect_sym(";");
            } else {
                fail("'set', 'prefix', 'cycle', 'filter' or '}'");
            }
        }
    }

    void goal_items(Block& b) {
        if (!accept_word("frame")) fail("'frame'");
        b.goal.frame = ident("a frame block name").text;
        expect_sym(";");
        b.goal.a = expr();
        expect_sym("<=");
        b.goal.b = expr();
        expect_sym(";");
    }

    ExprAst term() {
        ExprAst first = atom();
        if (!is_sym("&")) return first;
        ExprAst e;
        e.kind = ExprAst::And;
        e.at = first.at;
        e.kids.push_back(std::move(first));
        while (accept_sym("&")) e.kids.push_back(atom());
        return e;
    }

    ExprAst atom() {
        ExprAst e;
        e.at = peek().at;
        if (accept_sym("(")) {
            e = expr();
            expect_sym(")");
            return e;
        }
        if (peek().kind != Token::Ident) fail("a generator, 'top', 'bot' or '('");
        const Token t = ts_[pos_++];
        if (t.text == "top") {
            e.kind = ExprAst::Top;
        } else if (t.text == "bot") {
            e.kind = ExprAst::Bot;
        } else {
            e.kind = ExprAst::Name;
            e.name = t.text;
        }
        return e;
    }
};

}  // namespace

Document parse(const std::string& text) {
    Parser p(lex(text));
    return p.document();
}

Expression resolve(const ExprAst& e, const Presentation& pres) {
    switch (e.kind) {
        case ExprAst::Top: return Expression::top();
        case ExprAst::Bot: return Expression::bot();
        case ExprAst::Name:
            for (unsigned g = 0; g < pres.gens; ++g)
                if (pres.gen_name(g) == e.name) return Expression::gen(g);
            throw Error(ErrorKind::UnknownName, where(e.at) + ": no generator '" + e.name + "' in " + pres.name);
        case ExprAst::And: {
            Expression acc = Expression::top();
            for (const auto& k : e.kids) acc = meet(acc, resolve(k, pres));
            return normalize(acc);
        }
        case ExprAst::Or: {
            Expression acc = Expression::bot();
            for (const auto& k : e.kids) acc = join(acc, resolve(k, pres));
            return normalize(acc);
        }
    }
    return Expression::bot();
}

Expression parse_expression(const std::string& text, const Presentation& pres) {
    Parser p(lex(text));
    ExprAst e = p.expr();
    if (p.peek().kind != Token::End) p.fail("end of expression");
    return resolve(e, pres);
}

std::pair<Expression, Expression> parse_goal(const std::string& text, const Presentation& pres) {
    Parser p(lex(text));
    ExprAst a = p.expr();
    p.expect_sym("<=");
    ExprAst b = p.expr();
    if (p.peek().kind != Token::End) p.fail("end of goal");
    return {resolve(a, pres), resolve(b, pres)};
}

// --------------------------------------------------------------------------
// Builders

const Block* Document::find(const std::string& name) const {
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

const Block& Document::block(const std::string& name) const {
    if (const Block* b = find(name)) return *b;
    throw Error(ErrorKind::UnknownName, "no block named '" + name + "'");
}

namespace {

const Block& of_kind(const Document& d, const std::string& name, Block::Kind k) {
    const Block& b = d.block(name);
    if (b.kind != k)
        throw Error(ErrorKind::KindMismatch,
                    "block '" + name + "' is a " + to_string(b.kind) + ", expected a " + to_string(k));
    return b;
}

struct Args {
    const BuiltinRef& r;
    std::string sig;

    void arity(std::size_t n) const {
        if (r.args.size() != n)
            throw Error(ErrorKind::BadArgument, where(r.at) + ": " + r.name + " takes " + sig);
    }
    Index num(std::size_t i, Index cap) const {
        const auto* v = std::get_if<Index>(&r.args[i]);
        if (!v) throw Error(ErrorKind::BadArgument, where(r.at) + ": " + r.name + " takes " + sig);
        if (*v > cap)
            throw Error(ErrorKind::TooLarge, where(r.at) + ": argument " + std::to_string(*v) + " above " + std::to_string(cap));
        return *v;
    }
    const std::string& name(std::size_t i) const {
        const auto* v = std::get_if<std::string>(&r.args[i]);
        if (!v) throw Error(ErrorKind::BadArgument, where(r.at) + ": " + r.name + " takes " + sig);
        return *v;
    }
};

constexpr Index kMaxBuiltinSize = 4096;

}  // namespace

std::vector<std::string> builtin_names() {
    return {"chain(n)",        "antichain(n)",    "empty()",         "omega()",
            "handyfy(P)",      "handyfy_all(P)",  "np_to_npuf(P)",   "npuf_to_np(P)",
            "product(P, Q)",   "npuf_pi02(X)",    "uf_pi02(X, depth)", "frame(S)",
            "npuf(P, cutoff)", "uf(P, cutoff, levels)", "conjoin(X, Y)"};
}

CountablePoset Document::poset(const std::string& name) const { return poset_rec(name, 0); }

CountablePoset Document::poset_rec(const std::string& name, int depth) const {
    if (depth > 16) throw Error(ErrorKind::BadArgument, "builtin references nest too deeply at '" + name + "'");
    const Block& b = of_kind(*this, name, Block::Poset);
    if (!b.builtin) {
        std::map<std::string, Index> idx;
        for (Index i = 0; i < b.poset.elems.size(); ++i) idx[b.poset.elems[i]] = i;
        if (b.poset.elems.size() > kMaxBuiltinSize) throw Error(ErrorKind::TooLarge, "poset '" + name + "' too large");
        std::vector<std::pair<Index, Index>> le;
        for (const auto& [lo, hi] : b.poset.order) le.emplace_back(idx.at(lo), idx.at(hi));
        CountablePoset P = CountablePoset::generated(b.poset.elems, le);
        P.name = name;
        return P;
    }
    const BuiltinRef& r = *b.builtin;
    auto sub = [&](const std::string& n) { return poset_rec(n, depth + 1); };
    CountablePoset P;
    if (r.name == "chain" || r.name == "antichain") {
        Args a{r, "(n)"};
        a.arity(1);
        const Index n = a.num(0, kMaxBuiltinSize);
        P = r.name == "chain" ? chain_poset(n) : antichain_poset(n);
    } else if (r.name == "empty") {
        Args{r, "()"}.arity(0);
        P = empty_poset();
    } else if (r.name == "omega") {
        Args{r, "()"}.arity(0);
        P = omega_chain();
    } else if (r.name == "handyfy" || r.name == "handyfy_all" || r.name == "np_to_npuf" || r.name == "npuf_to_np") {
        Args a{r, "(P)"};
        a.arity(1);
        const CountablePoset Q = sub(a.name(0));
        if (r.name == "handyfy") P = handyfy_uf(Q).target;
        else if (r.name == "handyfy_all") P = handyfy_allfilters(Q).target;
        else if (r.name == "np_to_npuf") P = np_to_npuf(Q).target;
        else P = npuf_to_np(Q).target;
    } else if (r.name == "product") {
        Args a{r, "(P, Q)"};
        a.arity(2);
        P = product(sub(a.name(0)), sub(a.name(1))).R;
    } else if (r.name == "npuf_pi02") {
        Args a{r, "(X)"};
        a.arity(1);
        P = pi02_to_npuf(pi02(a.name(0))).P;
    } else if (r.name == "uf_pi02") {
        Args a{r, "(X, depth)"};
        a.arity(2);
        P = pi02_to_uf(pi02(a.name(0)), a.num(1, 64)).P;
    } else {
        throw Error(ErrorKind::UnknownName, where(r.at) + ": no poset builtin '" + r.name + "'");
    }
    return P;
}

Presentation Document::frame(const std::string& name) const {
    const Block& b = of_kind(*this, name, Block::Frame);
    Presentation pres;
    pres.name = name;
    pres.gens = static_cast<unsigned>(b.frame.gens.size());
    pres.names = b.frame.gens;
    for (const auto& [u, v] : b.frame.rels) pres.rels.emplace_back(resolve(u, pres), resolve(v, pres));
    return pres;
}

Pi02Code Document::pi02(const std::string& name) const {
    const Block& b = of_kind(*this, name, Block::Pi02);
    if (!b.builtin) {
        Pi02Code X;
        for (std::size_t i = 0; i < b.pi02.pairs.size(); ++i) {
            const auto& p = b.pi02.pairs[i];
            std::vector<BasicOpen> B, coA;
            for (const auto& s : p.open) B.push_back(BasicOpen::pn(s));
            for (const auto& s : p.coA) coA.push_back(BasicOpen::pn(s));
            X.pairs.push_back({OpenCode::of(std::move(B)), OpenCode::of(std::move(coA)), p.level.value_or(i)});
        }
        return X;
    }
    const BuiltinRef& r = *b.builtin;
    if (r.name == "frame") {
        Args a{r, "(S)"};
        a.arity(1);
        return frame_to_pi02(frame(a.name(0)));
    }
    if (r.name == "npuf") {
        Args a{r, "(P, cutoff)"};
        a.arity(2);
        return npuf_to_pi02(poset(a.name(0)), a.num(1, 256));
    }
    if (r.name == "uf") {
        Args a{r, "(P, cutoff, levels)"};
        a.arity(3);
        return uf_to_pi02(poset(a.name(0)), a.num(1, 256), a.num(2, 64)).B;
    }
    if (r.name == "conjoin") {
        Args a{r, "(X, Y)"};
        a.arity(2);
        if (a.name(0) == name || a.name(1) == name)
            throw Error(ErrorKind::BadArgument, where(r.at) + ": conjoin refers to its own block");
        return pi02_conjoin({pi02(a.name(0)), pi02(a.name(1))});
    }
    throw Error(ErrorKind::UnknownName, where(r.at) + ": no pi02 builtin '" + r.name + "'");
}

ExplicitSubset Document::point(const std::string& name) const {
    const Block& b = of_kind(*this, name, Block::Point);
    if (b.point.poset) throw Error(ErrorKind::KindMismatch, "point '" + name + "' is a filter point");
    ExplicitSubset x;
    x.prefix = b.point.prefix;
    x.cycle = b.point.cycle;
    return x;
}

FilterStream Document::filter_point(const std::string& name) const {
    const Block& b = of_kind(*this, name, Block::Point);
    if (!b.point.poset) throw Error(ErrorKind::KindMismatch, "point '" + name + "' is not a filter point");
    const CountablePoset P = poset(*b.point.poset);
    std::vector<Index> seq;
    for (const auto& l : b.point.chain) {
        auto i = P.find(l);
        if (!i) throw Error(ErrorKind::UnknownName, "no element '" + l + "' in " + *b.point.poset);
        if (!seq.empty() && !P.leq(*i, seq.back()))
            throw Error(ErrorKind::NotAFilter, "'" + l + "' is not below its predecessor in point '" + name + "'");
        seq.push_back(*i);
    }
    return FilterStream::from_vector(std::move(seq));
}

Expression Document::expr(const std::string& name, const Presentation& pres) const {
    return resolve(of_kind(*this, name, Block::Expr).expr, pres);
}

Document::Goal Document::goal(const std::string& name) const {
    const Block& b = of_kind(*this, name, Block::Goal);
    Goal g;
    g.pres = frame(b.goal.frame);
    g.a = resolve(b.goal.a, g.pres);
    g.b = resolve(b.goal.b, g.pres);
    return g;
}

// --------------------------------------------------------------------------
// Writers

namespace {

bool is_ident(const std::string& s) {
    if (s.empty() || !ident_start(s[0])) return false;
    return std::all_of(s.begin(), s.end(), ident_char);
}

std::string set_text(const FinSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.elems().size(); ++i) out += (i ? "," : "") + std::to_string(s.elems()[i]);
    return out + "}";
}

std::string open_text(const OpenCode& u) {
    std::string out = "open{";
    for (const auto& b : u.basics) out += " " + set_text(b.set);
    return out + (u.basics.empty() ? "}" : " }");
}

}  // namespace

std::string write_poset(const std::string& name, const CountablePoset& P) {
    if (!P.is_finite()) throw Error(ErrorKind::TooLarge, "only finite posets have a text form");
    const auto V = P.carrier();
    std::vector<std::string> names;
    std::set<std::string> used;
    for (Index i : V) {
        std::string l = P.label(i);
        if (!is_ident(l) || l == "elem" || l == "order" || l == "builtin" || used.count(l)) l = "e" + std::to_string(i);
        while (used.count(l)) l += "_";
        used.insert(l);
        names.push_back(l);
    }
    std::ostringstream out;
    out << "poset " << name << " {\n";
    if (!names.empty()) {
        out << "  elem";
        for (const auto& n : names) out << " " << n;
        out << ";\n";
    }
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = 0; j < V.size(); ++j)
            if (i != j && P.leq(V[i], V[j])) out << "  order " << names[i] << " < " << names[j] << ";\n";
    out << "}\n";
    return out.str();
}

std::string write_frame(const std::string& name, const Presentation& pres) {
    std::ostringstream out;
    out << "frame " << name << " {\n";
    if (pres.gens) {
        out << "  gen";
        for (unsigned g = 0; g < pres.gens; ++g) out << " " << pres.gen_name(g);
        out << ";\n";
    }
    for (const auto& [u, v] : pres.rels) out << "  rel " << pres.show(u) << " => " << pres.show(v) << ";\n";
    out << "}\n";
    return out.str();
}

std::string write_pi02(const std::string& name, const Pi02Code& X) {
    std::ostringstream out;
    out << "pi02 " << name << " {\n";
    if (!X.complete) out << "  # further constituents not listed\n";
    for (const auto& p : X.pairs) {
        for (const OpenCode* u : {&p.B, &p.coA})
            if (!u->complete) out << "  # next list complete below " << u->complete_below << "\n";
        out << "  pair " << open_text(p.B) << " coA " << open_text(p.coA) << " level " << p.level << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string write_point(const std::string& name, const ExplicitSubset& x) {
    std::ostringstream out;
    out << "point " << name << " {\n";
    if (!x.prefix.empty()) {
        out << "  prefix";
        for (bool b : x.prefix) out << " " << (b ? 1 : 0);
        out << ";\n";
    }
    out << "  cycle";
    for (bool b : x.cycle) out << " " << (b ? 1 : 0);
    out << ";\n}\n";
    return out.str();
}

}  // namespace qpk
