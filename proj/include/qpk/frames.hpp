#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qpk/common.hpp"

namespace qpk {

/// Finite set of generator indices as a bitmask (generators < 64).
using GenSet = std::uint64_t;

/// ⋁_k ⋀_{g ∈ f_k} g. No disjuncts is ⊥; the empty disjunct is ⊤.
struct Expression {
    std::vector<GenSet> disjuncts;

    static Expression top() { return Expression{{0}}; }
    static Expression bot() { return Expression{{}}; }
    static Expression gen(unsigned g) { return Expression{{GenSet{1} << g}}; }
    static Expression conj(GenSet s) { return Expression{{s}}; }

    bool operator==(const Expression& o) const { return disjuncts == o.disjuncts; }
    bool operator<(const Expression& o) const { return disjuncts < o.disjuncts; }
    GenSet support() const;
};

/// Lattice order: every disjunct of a contains some disjunct of b.
bool leq(const Expression& a, const Expression& b);
Expression meet(const Expression& a, const Expression& b);
Expression join(const Expression& a, const Expression& b);
/// Sorted, duplicate-free, without disjuncts containing another disjunct.
Expression normalize(const Expression& a);

struct Presentation {
    std::string name;
    unsigned gens = 0;
    std::vector<std::string> names;
    std::vector<std::pair<Expression, Expression>> rels;

    std::string gen_name(unsigned g) const;
    std::string show(const Expression& e) const;
};

/// Increasing generator sets p_0 ⊆ p_1 ⊆ ...; repeats the last stage.
/// `total` marks the last stage as the whole valuation.
struct FramePoint {
    std::vector<GenSet> stages;
    bool total = false;
    GenSet at(std::size_t i) const;
    GenSet final_set() const { return stages.empty() ? 0 : stages.back(); }
};

enum class Sat { Sat, Unsat, Unknown };
Sat point_sat(const FramePoint& x, const Expression& e, std::size_t stage);
/// Direct valuation: some disjunct inside x.
bool holds_in(GenSet x, const Expression& e);
bool satisfies_relations(const Presentation& pres, GenSet x);

/// All valuations of a finite generator set satisfying R; TooLarge above 16 generators.
std::vector<GenSet> enumerate_points(const Presentation& pres, unsigned max_gens = 16);

/// Least x ⊇ some disjunct of a, closed under R, with no disjunct of b inside,
/// found by the canonical search; the stages record its growth.
std::optional<FramePoint> countermodel(const Presentation& pres, const Expression& a, const Expression& b);

struct PrecResult {
    enum Verdict { Holds, Refuted, Unknown } verdict = Unknown;
    std::vector<std::string> chain;
    std::optional<FramePoint> witness;
};

enum class BaseReading {
    /// a node closes when a ≤ b, or by a relation instance
    Lattice,
    /// only relation instances (a∧u, b∧v) with a ≤ b close a node
    Literal,
};

enum class Rule { Base, Cut, LJoin, RJoin };
const char* to_string(Rule r);

struct ProofTree {
    Expression a, b;
    Rule rule = Rule::Base;
    /// relation used by a Base node, -1 for a lattice leaf
    int relation = -1;
    std::vector<ProofTree> children;
    std::size_t height() const;
    std::size_t size() const;
};

struct DeriveResult {
    enum Verdict { Proved, Refuted, Unknown } verdict = Unknown;
    std::optional<ProofTree> proof;
    std::optional<FramePoint> witness;
};

/// Saturation-based ≺ and proof search ⊢, caching the work per presentation.
class FrameProver {
public:
    explicit FrameProver(Presentation pres, BaseReading reading = BaseReading::Lattice);
    ~FrameProver();
    FrameProver(FrameProver&&) noexcept;
    FrameProver& operator=(FrameProver&&) noexcept;

    PrecResult prec(const Expression& a, const Expression& b, unsigned bound = 4);
    DeriveResult derives(const Expression& a, const Expression& b, unsigned depth);
    const Presentation& presentation() const { return pres_; }

private:
    struct Universe;
    Universe& universe_for(const Expression& a, const Expression& b, unsigned bound);

    Presentation pres_;
    BaseReading reading_;
    std::unique_ptr<Universe> full_;
};

PrecResult prec(const Expression& a, const Expression& b, const Presentation& pres, unsigned bound = 4);
DeriveResult derives(const Expression& a, const Expression& b, const Presentation& pres, unsigned depth,
                     BaseReading reading = BaseReading::Lattice);

/// Throws BadArgument describing the first node violating its rule.
void check_proof(const Presentation& pres, const ProofTree& t, BaseReading reading = BaseReading::Lattice);
std::string show_proof(const Presentation& pres, const ProofTree& t);

struct SpatialReport {
    bool semantic = false;
    PrecResult::Verdict prec = PrecResult::Unknown;
    DeriveResult::Verdict derives = DeriveResult::Unknown;
    std::vector<std::string> disagreements;
};
SpatialReport spatial_check(const Presentation& pres, const Expression& a, const Expression& b,
                            unsigned depth = 10);

}  // namespace qpk
