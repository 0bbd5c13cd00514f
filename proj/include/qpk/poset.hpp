#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qpk/codes.hpp"
#include "qpk/common.hpp"

namespace qpk {

/// Countable preorder on a subset of N. Finite carriers set `bound` (every
/// valid index is below it); rule-based carriers expose validity per index.
class CountablePoset {
public:
    using ValidFn = std::function<bool(Index)>;
    using LeqFn = std::function<bool(Index, Index)>;
    using LabelFn = std::function<std::string(Index)>;

    CountablePoset();
    /// Finite carrier {0..n-1}; `leq` is taken as given (not closed).
    static CountablePoset finite(std::vector<std::string> labels, std::vector<std::vector<bool>> leq);
    /// Finite carrier with the reflexive-transitive closure of `le` (pairs x <= y).
    static CountablePoset generated(std::vector<std::string> labels, const std::vector<std::pair<Index, Index>>& le);
    static CountablePoset rule(ValidFn valid, LeqFn leq, LabelFn label, std::optional<Index> bound = std::nullopt);

    bool valid(Index i) const;
    bool leq(Index a, Index b) const;
    bool lt(Index a, Index b) const { return leq(a, b) && !leq(b, a); }
    std::vector<Index> valid_below(Index n) const;
    /// All valid indices; finite carriers only.
    std::vector<Index> carrier() const;
    std::optional<Index> bound() const { return bound_; }
    bool is_finite() const { return bound_.has_value(); }
    std::string label(Index i) const;
    std::optional<Index> find(const std::string& label) const;

    std::string name;
    /// Known to be handy (UF = NP).
    bool handy_hint = false;
    /// Derived posets over a finite base of size k use blocks of width k:
    /// index n*k + p holds (p, n). Zero when there is no block structure.
    Index block = 0;

private:
    ValidFn valid_;
    LeqFn leq_;
    LabelFn label_;
    std::optional<Index> bound_;
};

CountablePoset chain_poset(Index n);
CountablePoset antichain_poset(Index n);
CountablePoset empty_poset();
/// c_0 > c_1 > c_2 > ... on all of N.
CountablePoset omega_chain();

struct PosetViolation {
    enum Kind { Reflexivity, Transitivity } kind;
    Index a, b, c;
};
std::vector<PosetViolation> check_poset(const CountablePoset& P, Index cutoff);

std::vector<Index> upward_closure(const CountablePoset& P, const std::vector<Index>& K, Index cutoff);

enum class StreamKind { Decreasing, Strict };

/// Filter given by a decreasing sequence; denotes the upward closure of its range.
class FilterStream {
public:
    /// Eventually constant: repeats the last entry.
    static FilterStream from_vector(std::vector<Index> seq, StreamKind kind = StreamKind::Decreasing);
    static FilterStream from_function(std::function<Index(std::size_t)> fn, StreamKind kind,
                                      std::optional<std::size_t> constant_from = std::nullopt);

    Index at(std::size_t n) const;
    std::vector<Index> prefix(std::size_t n) const;
    StreamKind kind() const { return kind_; }
    /// at(n) = at(constant_from) for n >= constant_from.
    std::optional<std::size_t> constant_from() const { return constant_from_; }

private:
    std::shared_ptr<const std::function<Index(std::size_t)>> fn_;
    StreamKind kind_ = StreamKind::Decreasing;
    std::optional<std::size_t> constant_from_;
};

/// p ∈ F witnessed by one of the first `depth` entries.
bool stream_member(const CountablePoset& P, const FilterStream& F, Index p, std::size_t depth);
/// Members among valid indices below cutoff, witnessed within depth.
std::vector<Index> stream_members(const CountablePoset& P, const FilterStream& F, Index cutoff, std::size_t depth);
/// Depth after which a finite-support stream adds nothing.
std::size_t effective_depth(const FilterStream& F, std::size_t depth);

/// Greedy descent through members below cutoff, least index first, strict steps preferred.
FilterStream stream_from_members(const CountablePoset& P, const std::function<bool(Index)>& member, Index cutoff);
/// As above after checking the prefix is upward closed and directed (NotAFilter otherwise).
FilterStream filter_from_membership(const CountablePoset& P, const std::function<bool(Index)>& member, Index cutoff);

struct FilterEq {
    enum Verdict { EqualAtDepth, Distinct, Unknown } verdict = Unknown;
    std::optional<Index> witness;
};
FilterEq filters_equal(const CountablePoset& P, const FilterStream& F, const FilterStream& G, std::size_t depth);

struct FilterClass {
    Tri unbounded = Tri::Unknown;
    Tri nonprincipal = Tri::Unknown;
    Tri maximal = Tri::Unknown;
};
FilterClass classify_filter(const CountablePoset& P, const FilterStream& F, std::size_t depth);

using IndexSet = std::vector<Index>;
struct FilterEnumeration {
    std::vector<IndexSet> all, uf, np, mf;
};
/// Exhaustive over a finite carrier; TooLarge above max_carrier().
FilterEnumeration enumerate_filters(const CountablePoset& P);
/// Maximal-filter predicate: every r outside F is incompatible with some member.
bool is_maximal_filter(const CountablePoset& P, const IndexSet& F);

PointView view_filter(const CountablePoset& P, const FilterStream& F);
PointView view_filter_pair(const CountablePoset& P, const FilterStream& F, const CountablePoset& Q,
                           const FilterStream& G);

struct PosetIso {
    CountablePoset source, target;
    MapCode forward, backward;
};

/// Image of a point under a map code into filters of `target`, as a greedy stream
/// over target members below cutoff. Map triples are read at `map_stage`,
/// which defaults to the cutoff.
FilterStream image_stream(const MapCode& f, const PointView& x, const CountablePoset& target, Index cutoff,
                          std::size_t depth, std::optional<std::size_t> map_stage = std::nullopt);
FilterStream iso_forward(const PosetIso& iso, const FilterStream& F, Index cutoff, std::size_t depth);
FilterStream iso_backward(const PosetIso& iso, const FilterStream& G, Index cutoff, std::size_t depth);

/// Index of (p, n) in a derived poset over `base`, and its inverse.
Index level_index(const CountablePoset& base, Index p, Index n);
std::pair<Index, Index> level_coords(const CountablePoset& base, Index i);
/// Cutoff covering levels < n of a derived poset.
Index level_cutoff(const CountablePoset& base, Index levels);

/// {(p,n) : ∀q<n, q ≮ p} with (p,n) < (q,m) iff p ≤ q and n > m.
PosetIso handyfy_uf(const CountablePoset& P);
/// {(p,n) : p ≤ n} with the same order; all filters of P become unbounded ones.
PosetIso handyfy_allfilters(const CountablePoset& P);
/// Same carrier, p' > q' iff p > q and p < q as indices.
PosetIso np_to_npuf(const CountablePoset& P);
/// {(n,p) : ∀q≤n, p ≱ q} with (n,p) > (m,q) iff p > q and m > n.
PosetIso npuf_to_np(const CountablePoset& P);

/// k rounds of P ↦ {p : ∃q (p > q)} on indices below cutoff. For infinite P
/// the q of round r are searched below cutoff·(k + 1 - r).
CountablePoset prune_iterate(const CountablePoset& P, std::size_t k, Index cutoff);

struct ProductResult {
    CountablePoset R;
    MapCode pairing;  // UF(P) × UF(Q) → UF(R)
    MapCode proj1, proj2;
    CountablePoset P, Q;
    /// 0 means Cantor pairing, otherwise r = p + q*width
    Index width = 0;
    Index encode(Index p, Index q) const;
    std::pair<Index, Index> decode(Index r) const;
};
/// Componentwise order: (p,q) ≤ (p',q') iff p ≤ p' and q ≤ q'.
ProductResult product(const CountablePoset& P, const CountablePoset& Q);
FilterStream product_pair(const ProductResult& pr, const FilterStream& F, const FilterStream& G, Index cutoff,
                          std::size_t depth);
FilterStream product_proj(const ProductResult& pr, int which, const FilterStream& H, Index cutoff,
                          std::size_t depth);

enum class SeqOrder {
    /// (p_0..p_n) > (p'_0..p'_k) iff ∀i<n p_i ≥ p'_i and n < k
    AsWritten,
    /// the same with i ≤ n
    Inclusive,
};
struct ProductSeqResult {
    CountablePoset R;
    std::vector<CountablePoset> factors;
    std::vector<MapCode> projections;
    Index encode(const std::vector<Index>& t) const;
    std::vector<Index> decode(Index r) const;
};
ProductSeqResult product_seq(const std::vector<CountablePoset>& factors, SeqOrder order = SeqOrder::AsWritten);
/// Projection i of a filter of R: upward closure of {t_i : t ∈ H}.
FilterStream product_seq_proj(const ProductSeqResult& pr, std::size_t i, const FilterStream& H, Index cutoff,
                              std::size_t depth);

struct HandyReport {
    /// window elements without a strict predecessor below the extended cutoff
    std::vector<Index> no_predecessor;
    /// (r, start): r is strictly below the whole greedy chain from start
    std::vector<std::pair<Index, Index>> bounded_chains;
    bool ok() const { return no_predecessor.empty() && bounded_chains.empty(); }
};
/// Finite check of handiness: window = indices below `window`, predecessors and
/// descending chains searched below `extended`.
HandyReport handy_check(const CountablePoset& P, Index window, Index extended);

}  // namespace qpk
