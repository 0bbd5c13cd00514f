#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpk/common.hpp"
#include "qpk/pn.hpp"

namespace qpk {

enum class SpaceKind { PN, Filter, FilterPair, QM };
const char* to_string(SpaceKind k);

/// Basic open set of one of the supported spaces.
///  PN:         N_s = {x : s ⊆ x}
///  Filter:     N_p = {F : p ∈ F}
///  FilterPair: N_p × N_q, elem = pair_index(p, q)
///  QM:         B_d(center, radius)
struct BasicOpen {
    SpaceKind kind = SpaceKind::PN;
    FinSet set;
    Index elem = 0;
    Rational radius;

    static BasicOpen pn(FinSet s);
    static BasicOpen filter(Index p);
    static BasicOpen filter_pair(Index p, Index q);
    static BasicOpen ball(Index center, Rational r);

    bool operator==(const BasicOpen& o) const;
    bool operator<(const BasicOpen& o) const;
    std::string str() const;
};

/// Union of basic opens. `complete` says the list is the whole code;
/// otherwise only basics with every member below `complete_below` are
/// guaranteed listed (PN codes only).
struct OpenCode {
    SpaceKind kind = SpaceKind::PN;
    std::vector<BasicOpen> basics;
    bool complete = true;
    Index complete_below = 0;

    static OpenCode of(std::vector<BasicOpen> bs);
    static OpenCode empty(SpaceKind k = SpaceKind::PN);
    static OpenCode whole_pn();
};

/// How a code sees a point: three-valued membership in basic opens.
struct PointView {
    SpaceKind kind = SpaceKind::PN;
    std::function<Tri(const BasicOpen&, std::size_t stage)> in_basic;
    /// PN points known to be subsets of {0..bound-1}.
    std::optional<Index> support_bound;
};

PointView view_explicit(const ExplicitSubset& s);
PointView view_finite(const FinSet& s);
/// Positive information only: Out is never certified for a basic.
PointView view_pn_point(const PNPoint& x);

/// Finite-rank Borel code. Rank 1 carries basic opens; rank k > 1 carries
/// pieces (v_i, w_i) of rank k-1 and denotes the union of v_i minus w_i.
/// Polarity 0 denotes the complement.
struct BorelCode {
    int polarity = 1;
    int rank = 1;
    SpaceKind kind = SpaceKind::PN;
    OpenCode open;
    std::vector<std::pair<BorelCode, BorelCode>> pieces;

    static BorelCode empty(SpaceKind k = SpaceKind::PN);
    static BorelCode whole(SpaceKind k = SpaceKind::PN);
    static BorelCode open_set(OpenCode u);
    static BorelCode closed_set(OpenCode u);

    bool operator==(const BorelCode& o) const;
    std::string str() const;
};

/// Throws BadArgument when the tuple layout is broken or rank exceeds max_rank.
void validate(const BorelCode& c, int max_rank = 4);
BorelCode complement(const BorelCode& c);

/// One Π⁰₂ constituent A ∪ B where A is the complement of coA.
/// Pairs with level < stage are consulted at that stage.
struct Pi02Pair {
    OpenCode B;
    OpenCode coA;
    std::size_t level = 0;
};

struct Pi02Code {
    SpaceKind kind = SpaceKind::PN;
    std::vector<Pi02Pair> pairs;
    /// No constituents beyond `pairs`.
    bool complete = true;
    bool disjoint = false;
};

Tri member_open(const PointView& x, const OpenCode& u, std::size_t stage);
Tri member_at(const PointView& x, const BorelCode& c, std::size_t stage);
Tri member_at(const PointView& x, const Pi02Code& c, std::size_t stage);
/// Conjunction of the constituents consulted at `stage` only, ignoring the
/// ones not yet reached.
Tri pairs_upto(const PointView& x, const Pi02Code& c, std::size_t stage);
/// Only the closed constituents (empty B) at the stage; Out here is monotone
/// under adding elements to a PN point.
bool closed_violation(const PointView& x, const Pi02Code& c, std::size_t stage);

BorelCode to_borel(const Pi02Code& c);
Pi02Code pi02_conjoin(const std::vector<Pi02Code>& cs);

/// Rule-based tree: predicate on finite sequences, assumed prefix closed.
using RuleTree = std::function<bool(const std::vector<Index>&)>;

/// Y = ⋂ D_σ ∩ ⋂ E_j encoding the union of trees T_n as paths through
/// columns: the point of x is {⟨n,0⟩} ∪ {⟨x(j), j+1⟩}.
struct TreeEncoding {
    Pi02Code Y;
    std::function<RuleTree(Index)> trees;
    Index roots = 0;
    /// entries of the sequences are below this
    Index bound = 0;
    /// sequences are explored up to this length
    std::size_t depth = 0;
};

/// Pair index used by the encoding; cell (i, j).
Index tree_cell(Index i, Index j);
TreeEncoding tree_to_pi02(std::function<RuleTree(Index)> trees, Index roots, Index bound, std::size_t depth);
/// Stage-k verdict on Y ∩ N_{⟨n,0⟩}: No when every candidate of length k is excluded.
/// Exclusions exist only up to enc.depth, so k beyond it answers Yes for nonempty roots.
Tri tree_nonempty_at(const TreeEncoding& enc, Index n, std::size_t k);

struct MapTriple {
    Index n = 0;
    BasicOpen cod;
    BasicOpen dom;
};

/// Continuous map code: triples (n, V, U) read as x ∈ U ⟹ f(x) ∈ V, and
/// f(x) ∈ V only through such triples.
struct MapCode {
    SpaceKind dom = SpaceKind::PN;
    SpaceKind cod = SpaceKind::PN;
    std::string name;
    /// All triples whose parameters fall below `stage`; monotone in stage.
    std::function<std::vector<MapTriple>(std::size_t stage)> triples;
    /// Optional fast path: domain basics U with (n, V, U) for some n, at stage.
    std::function<std::vector<BasicOpen>(const BasicOpen& V, std::size_t stage)> pre;
    /// triples(stage) is the same for every stage
    bool finite = false;
    /// Artifact iso codes: every domain point gets a consistent image.
    bool total = false;
    /// Codomain disjointness test for conflict search.
    std::function<bool(const BasicOpen&, const BasicOpen&)> disjoint;

    static MapCode empty(SpaceKind dom, SpaceKind cod);
    static MapCode identity(SpaceKind k);
    static MapCode from_triples(SpaceKind dom, SpaceKind cod, std::vector<MapTriple> ts);
};

OpenCode preimage(const MapCode& f, const BasicOpen& V, std::size_t stage);
/// Codomain basics certified for x by stage.
std::vector<BasicOpen> apply(const MapCode& f, const PointView& x, std::size_t stage);

struct DomainVerdict {
    Tri verdict = Tri::Unknown;
    std::optional<std::pair<BasicOpen, BasicOpen>> conflict;
};
DomainVerdict in_domain_at(const MapCode& f, const PointView& x, std::size_t stage);

/// g ∘ f: x ↦ g(f(x)).
MapCode compose(const MapCode& f, const MapCode& g);

}  // namespace qpk
