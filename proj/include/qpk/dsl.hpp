#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qpk/codes.hpp"
#include "qpk/frames.hpp"
#include "qpk/pn.hpp"
#include "qpk/poset.hpp"

namespace qpk {

struct Span {
    std::size_t line = 1, col = 1;
};

class ParseError : public Error {
public:
    ParseError(Span at, std::string expected, const std::string& found);
    Span at;
    std::string expected;
};

/// Expression as written; names resolve against a presentation on use.
struct ExprAst {
    enum Kind { Top, Bot, Name, And, Or } kind = Top;
    std::string name;
    Span at;
    std::vector<ExprAst> kids;
};

using BuiltinArg = std::variant<Index, std::string>;
struct BuiltinRef {
    std::string name;
    std::vector<BuiltinArg> args;
    Span at;
};

struct PosetBlock {
    std::vector<std::string> elems;
    /// (lower, upper)
    std::vector<std::pair<std::string, std::string>> order;
    std::vector<Span> order_at;
};

struct FrameBlock {
    std::vector<std::string> gens;
    std::vector<std::pair<ExprAst, ExprAst>> rels;
};

struct PairAst {
    std::vector<FinSet> open, coA;
    std::optional<std::size_t> level;
};
struct Pi02Block {
    std::vector<PairAst> pairs;
};

struct PointBlock {
    std::vector<bool> prefix;
    std::vector<bool> cycle{false};
    /// filter point: poset block and labels of a decreasing chain
    std::optional<std::string> poset;
    std::vector<std::string> chain;
};

struct GoalBlock {
    std::string frame;
    ExprAst a, b;
};

struct Block {
    enum Kind { Poset, Frame, Pi02, Point, Expr, Goal } kind = Poset;
    std::string name;
    Span at;
    std::optional<BuiltinRef> builtin;
    PosetBlock poset;
    FrameBlock frame;
    Pi02Block pi02;
    PointBlock point;
    ExprAst expr;
    GoalBlock goal;
};
const char* to_string(Block::Kind k);

/// Parsed document. Builders resolve cross-references and builtins and throw
/// UnknownName / KindMismatch / BadArgument on bad references.
class Document {
public:
    std::vector<Block> blocks;

    const Block& block(const std::string& name) const;
    const Block* find(const std::string& name) const;

    CountablePoset poset(const std::string& name) const;
    Presentation frame(const std::string& name) const;
    Pi02Code pi02(const std::string& name) const;
    ExplicitSubset point(const std::string& name) const;
    FilterStream filter_point(const std::string& name) const;
    Expression expr(const std::string& name, const Presentation& pres) const;
    struct Goal {
        Presentation pres;
        Expression a, b;
    };
    Goal goal(const std::string& name) const;

private:
    CountablePoset poset_rec(const std::string& name, int depth) const;
};

/// Throws ParseError with the position of the first offending token.
Document parse(const std::string& text);
/// `a <= b` against a presentation.
std::pair<Expression, Expression> parse_goal(const std::string& text, const Presentation& pres);
Expression parse_expression(const std::string& text, const Presentation& pres);
Expression resolve(const ExprAst& e, const Presentation& pres);

/// Serializers producing text `parse` accepts.
std::string write_poset(const std::string& name, const CountablePoset& P);
std::string write_frame(const std::string& name, const Presentation& pres);
std::string write_pi02(const std::string& name, const Pi02Code& X);
std::string write_point(const std::string& name, const ExplicitSubset& x);

/// Names accepted after `builtin`, with their argument shapes.
std::vector<std::string> builtin_names();

}  // namespace qpk
