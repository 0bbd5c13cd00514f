#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpk/codes.hpp"
#include "qpk/common.hpp"
#include "qpk/frames.hpp"
#include "qpk/pn.hpp"
#include "qpk/poset.hpp"
#include "qpk/qmetric.hpp"

namespace qpk {

// ---------------------------------------------------------------------------
// Unbounded filters of a handy poset as a Π⁰₂ subset of P(N).

struct UfPi02 {
    CountablePoset P;
    /// ⋂ U_n ∩ C. U_n sits at level n; the filter axioms C at level 0.
    Pi02Code B;
    /// Filter(P) -> P(N), F ↦ its set of indices
    MapCode ghat;
    /// P(N) -> Filter(P), x ↦ {p : p ∈ x}
    MapCode inverse;
    /// Enumerations of basics stop here.
    Index cutoff = 0;
    /// Position of U_n in B.pairs.
    std::vector<std::size_t> u_pairs;

    /// g(p) = {q <= p : p <=_P q}
    FinSet g(Index p) const;
    /// r_i = (⋃_{k<=i} g(q_k)) ∩ {0..i}
    PNPoint point(const FilterStream& F) const;
    FilterStream filter_of(const PointView& x, std::size_t depth) const;
};

/// Throws NotHandy unless P passes handy_check(P, cutoff, cutoff + block).
/// `levels` is the number of U_n constituents emitted.
UfPi02 uf_to_pi02(const CountablePoset& P, Index cutoff, std::size_t levels);

/// Subsets x of {0..window-1} on which every constituent consulted at `stage`
/// holds, among supersets of the given seeds. Elements that cannot be added to
/// a seed without violating a constituent whose open part has no basic inside
/// the window are discarded up front; TooLarge if more than 20 remain.
std::vector<FinSet> finite_members(const Pi02Code& X, std::size_t stage, Index window,
                                   const std::vector<FinSet>& seeds);
/// finite_members seeded with the basics of U_{stage-1} that fit in the window.
std::vector<FinSet> stage_inhabitants(const UfPi02& r, std::size_t stage, Index window);

// ---------------------------------------------------------------------------
// Π⁰₂ subsets of P(N) as spaces of filters.

/// (i, l, q) stored at triple_index(i, l, mask(q)).
struct NpufFromPi02 {
    Pi02Code X;
    CountablePoset P;
    /// Filter(P) -> P(N), F ↦ ⋃ {q : (i,l,q) ∈ F}
    MapCode f;
    /// P(N) -> Filter(P), G ↦ {(i,l,q) : q ⊆ G}
    MapCode g;
    Index encode(Index i, Index l, const FinSet& q) const;
    std::tuple<Index, Index, FinSet> decode(Index t) const;
    PNPoint point(const FilterStream& F) const;
    /// (i, l_i, q_i) with G ∩ {0..i} ⊆ q_i ⊆ G; PointOutsideY when no such q_i
    /// is found within `search` further elements.
    FilterStream filter_of(const ExplicitSubset& G, std::size_t search = 64) const;
};
NpufFromPi02 pi02_to_npuf(const Pi02Code& X);

/// Points: index sets of filters F of P with ∀n ∃k ∈ F (n ≰ k). Basics range
/// below `cutoff`; constituents about indices p, q sit at level max(p, q).
Pi02Code npuf_to_pi02(const CountablePoset& P, Index cutoff);

/// (n, q) stored at pair_index(n, mask(q)).
struct UfFromPi02 {
    Pi02Code X;
    CountablePoset P;
    MapCode f;
    MapCode g;
    /// Bounded search agrees with infinite extension.
    bool exact = false;
    Index universe = 0;
    std::size_t depth = 0;
    Index encode(Index n, const FinSet& q) const;
    std::pair<Index, FinSet> decode(Index t) const;
    PNPoint point(const FilterStream& F) const;
    FilterStream filter_of(const ExplicitSubset& G, std::size_t search = 64) const;
    /// q lies in the first n+1 constituents.
    bool admissible(Index n, const FinSet& q) const;
};
/// Keeps (n, q) when a chain q = h(n) ⊆ h(n+1) ⊆ ... ⊆ h(n+depth) of admissible
/// sets inside q ∪ {0..universe-1} exists. `universe` 0 picks the largest index
/// mentioned plus one.
UfFromPi02 pi02_to_uf(const Pi02Code& X, std::size_t path_search_depth, Index universe = 0);

// ---------------------------------------------------------------------------
// Quasi-metric spaces as spaces of filters.

struct QmUf {
    QMSpaceCode space;
    /// A × Q₊ with (a,r) < (b,s) iff s - d(b,a) > r. Indices pack the bit
    /// lengths of the radius, its numerator and denominator, then a.
    CountablePoset P;
    Index encode(Index a, const Rational& r) const;
    std::pair<Index, Rational> decode(Index t) const;
    /// ⟨(a_i, 2^{-i+1})⟩
    FilterStream phi(const QMPoint& x) const;
    /// Least-k refinement of F, then the space's limit operator.
    QMPoint psi(const FilterStream& F, std::size_t search = 4096) const;
    /// The refined chain (b_n, s_n) with s_n < 2^{-n} for n >= 1.
    std::vector<Index> refine(const FilterStream& F, std::size_t length, std::size_t search = 4096) const;
};
/// InexactMetric without exact distances.
QmUf qm_to_uf(const QMSpaceCode& space);

enum class DenseKind { Closed, Gdelta, Sigma2 };
const char* to_string(DenseKind k);
DenseKind parse_dense_kind(const std::string& s);

/// Points of the coded set, dense for d̂ at scale 2^{-bound}: closed and Σ⁰₂
/// sets give finite σ ⊆ {0..bound-1}, G_δ sets give σ ∪ {bound, bound+1, ...}.
/// nullopt when a candidate's membership is undetermined.
std::optional<std::vector<ExplicitSubset>> dense_sequence(const BorelCode& code, DenseKind kind, Index bound);
std::optional<std::vector<ExplicitSubset>> dense_sequence(const Pi02Code& code, DenseKind kind, Index bound);

/// Carrier = the dense points, distance = dprime at the requested precision.
QMSpaceCode pi02_to_qm(const Pi02Code& X, const std::vector<ExplicitSubset>& dense,
                       const InverseDistanceOracle& oracle);

// ---------------------------------------------------------------------------
// Frames.

/// Generator n ↦ n; X = ⋂ (f(v_i) ∪ (N \ f(u_i))).
Pi02Code frame_to_pi02(const Presentation& pres);
/// Relations (f⁻¹(coA_i), f⁻¹(B_i)); `gens` defaults to the largest index used plus one.
Presentation pi02_to_frame(const Pi02Code& X, std::optional<unsigned> gens = std::nullopt);
OpenCode expression_open(const Expression& e);
Expression open_expression(const OpenCode& u);

}  // namespace qpk
