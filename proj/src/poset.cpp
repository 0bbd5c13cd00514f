#include "qpk/poset.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qpk {

namespace {

std::string letter_label(Index i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "e" + std::to_string(i);
}

}  // namespace

CountablePoset::CountablePoset()
    : valid_([](Index) { return false; }), leq_([](Index a, Index b) { return a == b; }), bound_(0) {}

CountablePoset CountablePoset::finite(std::vector<std::string> labels, std::vector<std::vector<bool>> leq) {
    const Index n = labels.size();
    auto lab = std::make_shared<std::vector<std::string>>(std::move(labels));
    auto mat = std::make_shared<std::vector<std::vector<bool>>>(std::move(leq));
    CountablePoset P = rule([n](Index i) { return i < n; }, [mat](Index a, Index b) { return (*mat)[a][b]; },
                            [lab](Index i) { return (*lab)[i]; }, n);
    return P;
}

CountablePoset CountablePoset::generated(std::vector<std::string> labels,
                                         const std::vector<std::pair<Index, Index>>& le) {
    const std::size_t n = labels.size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = true;
    for (auto [a, b] : le) {
        if (a >= n || b >= n) throw Error(ErrorKind::BadArgument, "order pair outside carrier");
        m[a][b] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (m[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (m[k][j]) m[i][j] = true;
    return finite(std::move(labels), std::move(m));
}

CountablePoset CountablePoset::rule(ValidFn valid, LeqFn leq, LabelFn label, std::optional<Index> bound) {
    CountablePoset P;
    P.valid_ = std::move(valid);
    P.leq_ = std::move(leq);
    P.label_ = std::move(label);
    P.bound_ = bound;
    return P;
}

bool CountablePoset::valid(Index i) const {
    if (bound_ && i >= *bound_) return false;
    return valid_(i);
}

bool CountablePoset::leq(Index a, Index b) const { return leq_(a, b); }

std::vector<Index> CountablePoset::valid_below(Index n) const {
    if (bound_) n = std::min(n, *bound_);
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i)
        if (valid_(i)) out.push_back(i);
    return out;
}

std::vector<Index> CountablePoset::carrier() const {
    if (!bound_) throw Error(ErrorKind::TooLarge, "carrier of an infinite poset");
    return valid_below(*bound_);
}

std::string CountablePoset::label(Index i) const { return label_ ? label_(i) : std::to_string(i); }

std::optional<Index> CountablePoset::find(const std::string& l) const {
    if (!bound_) return std::nullopt;
    for (Index i : carrier())
        if (label(i) == l) return i;
    return std::nullopt;
}

CountablePoset chain_poset(Index n) {
    CountablePoset P = CountablePoset::rule([n](Index i) { return i < n; }, [](Index a, Index b) { return a >= b; },
                                            letter_label, n);
    P.name = "chain" + std::to_string(n);
    return P;
}

CountablePoset antichain_poset(Index n) {
    CountablePoset P = CountablePoset::rule([n](Index i) { return i < n; }, [](Index a, Index b) { return a == b; },
                                            letter_label, n);
    P.name = "antichain" + std::to_string(n);
    return P;
}

CountablePoset empty_poset() {
    CountablePoset P;
    P.name = "empty";
    return P;
}

CountablePoset omega_chain() {
    CountablePoset P = CountablePoset::rule([](Index) { return true; }, [](Index a, Index b) { return a >= b; },
                                            [](Index i) { return "c" + std::to_string(i); });
    P.name = "omega-chain";
    P.handy_hint = true;
    return P;
}

std::vector<PosetViolation> check_poset(const CountablePoset& P, Index cutoff) {
    std::vector<PosetViolation> out;
    const auto V = P.valid_below(cutoff);
    for (Index a : V)
        if (!P.leq(a, a)) out.push_back({PosetViolation::Reflexivity, a, a, a});
    for (Index a : V)
        for (Index b : V) {
            if (!P.leq(a, b)) continue;
            for (Index c : V)
                if (P.leq(b, c) && !P.leq(a, c)) out.push_back({PosetViolation::Transitivity, a, b, c});
        }
    return out;
}

std::vector<Index> upward_closure(const CountablePoset& P, const std::vector<Index>& K, Index cutoff) {
    std::vector<Index> out;
    for (Index p : P.valid_below(cutoff))
        if (std::any_of(K.begin(), K.end(), [&](Index q) { return P.valid(q) && P.leq(q, p); })) out.push_back(p);
    return out;
}

FilterStream FilterStream::from_vector(std::vector<Index> seq, StreamKind kind) {
    if (seq.empty()) throw Error(ErrorKind::NotAFilter, "empty sequence denotes no filter");
    FilterStream F;
    const std::size_t last = seq.size() - 1;
    F.fn_ = std::make_shared<const std::function<Index(std::size_t)>>(
        [seq = std::move(seq), last](std::size_t n) { return seq[std::min(n, last)]; });
    F.kind_ = kind;
    F.constant_from_ = last;
    return F;
}

FilterStream FilterStream::from_function(std::function<Index(std::size_t)> fn, StreamKind kind,
                                         std::optional<std::size_t> constant_from) {
    FilterStream F;
    F.fn_ = std::make_shared<const std::function<Index(std::size_t)>>(std::move(fn));
    F.kind_ = kind;
    F.constant_from_ = constant_from;
    return F;
}

Index FilterStream::at(std::size_t n) const {
    if (constant_from_ && n > *constant_from_) n = *constant_from_;
    return (*fn_)(n);
}

std::vector<Index> FilterStream::prefix(std::size_t n) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return out;
}

std::size_t effective_depth(const FilterStream& F, std::size_t depth) {
    if (F.constant_from()) return std::min(depth, *F.constant_from() + 1);
    return depth;
}

bool stream_member(const CountablePoset& P, const FilterStream& F, Index p, std::size_t depth) {
    const std::size_t d = effective_depth(F, depth);
    for (std::size_t i = 0; i < d; ++i)
        if (P.leq(F.at(i), p)) return true;
    return false;
}

std::vector<Index> stream_members(const CountablePoset& P, const FilterStream& F, Index cutoff, std::size_t depth) {
    std::vector<Index> out;
    const std::size_t d = effective_depth(F, depth);
    std::vector<Index> seq = F.prefix(d);
    for (Index p : P.valid_below(cutoff))
        if (std::any_of(seq.begin(), seq.end(), [&](Index a) { return P.leq(a, p); })) out.push_back(p);
    return out;
}

FilterStream stream_from_members(const CountablePoset& P, const std::function<bool(Index)>& member, Index cutoff) {
    std::vector<Index> M;
    for (Index p : P.valid_below(cutoff))
        if (member(p)) M.push_back(p);
    if (M.empty()) throw Error(ErrorKind::NotAFilter, "no members below cutoff");
    std::vector<Index> seq{M.front()};
    for (;;) {
        const Index cur = seq.back();
        auto strict = std::find_if(M.begin(), M.end(), [&](Index m) { return P.lt(m, cur); });
        if (strict != M.end()) {
            seq.push_back(*strict);
            continue;
        }
        const Index weak = *std::find_if(M.begin(), M.end(), [&](Index m) { return P.leq(m, cur); });
        if (weak == cur) break;
        seq.push_back(weak);
    }
    return FilterStream::from_vector(std::move(seq));
}

FilterStream filter_from_membership(const CountablePoset& P, const std::function<bool(Index)>& member,
                                    Index cutoff) {
    const auto V = P.valid_below(cutoff);
    std::vector<Index> M;
    for (Index p : V)
        if (member(p)) M.push_back(p);
    if (M.empty()) throw Error(ErrorKind::NotAFilter, "empty set");
    std::set<Index> inM(M.begin(), M.end());
    for (Index p : M)
        for (Index q : V)
            if (P.leq(p, q) && !inM.count(q))
                throw Error(ErrorKind::NotAFilter, "not upward closed: " + P.label(p) + " <= " + P.label(q));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = i + 1; j < M.size(); ++j) {
            const bool lower = std::any_of(M.begin(), M.end(),
                                           [&](Index r) { return P.leq(r, M[i]) && P.leq(r, M[j]); });
            if (!lower)
                throw Error(ErrorKind::NotAFilter, "not directed: " + P.label(M[i]) + ", " + P.label(M[j]));
        }
    return stream_from_members(P, member, cutoff);
}

namespace {

// every entry of F (first `depth`) lies above some entry of G (first `look`)
bool dominated(const CountablePoset& P, const FilterStream& F, const FilterStream& G, std::size_t depth,
               std::size_t look) {
    const auto fs = F.prefix(effective_depth(F, depth));
    const auto gs = G.prefix(effective_depth(G, look));
    return std::all_of(fs.begin(), fs.end(), [&](Index p) {
        return std::any_of(gs.begin(), gs.end(), [&](Index q) { return P.leq(q, p); });
    });
}

bool exact_regime(const CountablePoset& P, const FilterStream& F) {
    return P.is_finite() && F.constant_from().has_value();
}

std::vector<Index> exact_members(const CountablePoset& P, const FilterStream& F) {
    return stream_members(P, F, *P.bound(), *F.constant_from() + 1);
}

}  // namespace

FilterEq filters_equal(const CountablePoset& P, const FilterStream& F, const FilterStream& G, std::size_t depth) {
    FilterEq r;
    if (exact_regime(P, F) && exact_regime(P, G)) {
        const auto a = exact_members(P, F);
        const auto b = exact_members(P, G);
        if (a == b) {
            r.verdict = FilterEq::EqualAtDepth;
            return r;
        }
        std::vector<Index> diff;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
        r.verdict = FilterEq::Distinct;
        r.witness = diff.front();
        return r;
    }
    // a round trip may lag behind by a few entries, so look twice as deep for witnesses
    if (dominated(P, F, G, depth, 2 * depth) && dominated(P, G, F, depth, 2 * depth))
        r.verdict = FilterEq::EqualAtDepth;
    return r;
}

FilterClass classify_filter(const CountablePoset& P, const FilterStream& F, std::size_t depth) {
    FilterClass c;
    if (exact_regime(P, F)) {
        const auto S = exact_members(P, F);
        const auto V = P.carrier();
        c.unbounded = std::any_of(V.begin(), V.end(), [&](Index r) {
                          return std::all_of(S.begin(), S.end(), [&](Index p) { return P.lt(r, p); });
                      })
                          ? Tri::No
                          : Tri::Yes;
        c.nonprincipal = std::all_of(S.begin(), S.end(), [&](Index p) {
                             return std::any_of(S.begin(), S.end(), [&](Index q) { return P.lt(q, p); });
                         })
                             ? Tri::Yes
                             : Tri::No;
        c.maximal = is_maximal_filter(P, S) ? Tri::Yes : Tri::No;
        return c;
    }
    if (F.constant_from()) {
        // F = upcl(a): principal, and bounded exactly when a has a strict lower element
        const Index a = F.at(*F.constant_from());
        c.nonprincipal = Tri::No;
        const Index scan = P.is_finite() ? *P.bound() : std::max<Index>(a + 1, 64 * depth);
        const auto V = P.valid_below(scan);
        if (std::any_of(V.begin(), V.end(), [&](Index r) { return P.lt(r, a); }))
            c.unbounded = Tri::No;
        else if (P.is_finite())
            c.unbounded = Tri::Yes;
        return c;
    }
    if (F.kind() == StreamKind::Strict) {
        c.nonprincipal = Tri::Yes;
        if (P.handy_hint) c.unbounded = Tri::Yes;
    }
    return c;
}

bool is_maximal_filter(const CountablePoset& P, const IndexSet& F) {
    const auto V = P.carrier();
    std::set<Index> inF(F.begin(), F.end());
    for (Index r : V) {
        if (inF.count(r)) continue;
        const bool incompatible = std::any_of(F.begin(), F.end(), [&](Index p) {
            return std::none_of(V.begin(), V.end(), [&](Index s) { return P.leq(s, r) && P.leq(s, p); });
        });
        if (!incompatible) return false;
    }
    return true;
}

FilterEnumeration enumerate_filters(const CountablePoset& P) {
    if (!P.is_finite()) throw Error(ErrorKind::TooLarge, "filter enumeration needs a finite poset");
    const auto V = P.carrier();
    if (V.size() > max_carrier())
        throw Error(ErrorKind::TooLarge, "carrier of size " + std::to_string(V.size()) + " exceeds " +
                                             std::to_string(max_carrier()));
    // nonempty finite directed sets have a least element, so filters are principal
    FilterEnumeration out;
    std::set<IndexSet> seen;
    for (Index r : V) {
        IndexSet S = upward_closure(P, {r}, *P.bound());
        if (!seen.insert(S).second) continue;
        out.all.push_back(S);
        const bool bounded = std::any_of(V.begin(), V.end(), [&](Index s) {
            return std::all_of(S.begin(), S.end(), [&](Index p) { return P.lt(s, p); });
        });
        if (!bounded) out.uf.push_back(S);
        const bool np = std::all_of(S.begin(), S.end(), [&](Index p) {
            return std::any_of(S.begin(), S.end(), [&](Index q) { return P.lt(q, p); });
        });
        if (np) out.np.push_back(S);
        if (is_maximal_filter(P, S)) out.mf.push_back(S);
    }
    return out;
}

PointView view_filter(const CountablePoset& P, const FilterStream& F) {
    PointView v;
    v.kind = SpaceKind::Filter;
    v.in_basic = [P, F](const BasicOpen& b, std::size_t stage) {
        if (b.kind != SpaceKind::Filter) throw Error(ErrorKind::SpaceMismatch, "filter point, foreign basic open");
        if (!P.valid(b.elem)) return Tri::No;
        if (stream_member(P, F, b.elem, stage)) return Tri::Yes;
        if (exact_regime(P, F) && stage > *F.constant_from()) return Tri::No;
        return Tri::Unknown;
    };
    return v;
}

PointView view_filter_pair(const CountablePoset& P, const FilterStream& F, const CountablePoset& Q,
                           const FilterStream& G) {
    PointView v;
    v.kind = SpaceKind::FilterPair;
    const PointView vf = view_filter(P, F), vg = view_filter(Q, G);
    v.in_basic = [vf, vg](const BasicOpen& b, std::size_t stage) {
        if (b.kind != SpaceKind::FilterPair) throw Error(ErrorKind::SpaceMismatch, "pair point, foreign basic open");
        auto [p, q] = unpair_index(b.elem);
        return tri_and(vf.in_basic(BasicOpen::filter(p), stage), vg.in_basic(BasicOpen::filter(q), stage));
    };
    return v;
}

FilterStream image_stream(const MapCode& f, const PointView& x, const CountablePoset& target, Index cutoff,
                          std::size_t depth, std::optional<std::size_t> map_stage) {
    if (f.cod != SpaceKind::Filter) throw Error(ErrorKind::SpaceMismatch, "image must be a filter space");
    const std::size_t stage = map_stage.value_or(cutoff);
    auto member = [&](Index q) {
        const OpenCode u = preimage(f, BasicOpen::filter(q), stage);
        return std::any_of(u.basics.begin(), u.basics.end(),
                           [&](const BasicOpen& b) { return x.in_basic(b, depth) == Tri::Yes; });
    };
    return stream_from_members(target, member, cutoff);
}

FilterStream iso_forward(const PosetIso& iso, const FilterStream& F, Index cutoff, std::size_t depth) {
    return image_stream(iso.forward, view_filter(iso.source, F), iso.target, cutoff, depth);
}

FilterStream iso_backward(const PosetIso& iso, const FilterStream& G, Index cutoff, std::size_t depth) {
    return image_stream(iso.backward, view_filter(iso.target, G), iso.source, cutoff, depth);
}

Index level_index(const CountablePoset& base, Index p, Index n) {
    if (base.is_finite()) return n * *base.bound() + p;
    return pair_index(p, n);
}

std::pair<Index, Index> level_coords(const CountablePoset& base, Index i) {
    if (base.is_finite()) {
        const Index k = *base.bound();
        return {i % k, i / k};
    }
    return unpair_index(i);
}

Index level_cutoff(const CountablePoset& base, Index levels) {
    if (base.is_finite()) return levels * *base.bound();
    return levels == 0 ? 0 : pair_index(2 * levels - 1, 0);
}

namespace {

// Poset on pairs (p, n) of a base element and a level; `ok` decides validity,
// `below` the strict relation. Over an empty finite base the result is empty.
CountablePoset derived(const CountablePoset& base, std::function<bool(Index, Index)> ok,
                       std::function<bool(Index, Index, Index, Index)> below, const std::string& name) {
    if (base.is_finite() && *base.bound() == 0) {
        CountablePoset e = empty_poset();
        e.name = name;
        return e;
    }
    auto valid = [base, ok](Index i) {
        auto [p, n] = level_coords(base, i);
        return base.valid(p) && ok(p, n);
    };
    auto leq = [base, below](Index i, Index j) {
        if (i == j) return true;
        auto [p, n] = level_coords(base, i);
        auto [q, m] = level_coords(base, j);
        return below(p, n, q, m);
    };
    auto label = [base](Index i) {
        auto [p, n] = level_coords(base, i);
        return "(" + base.label(p) + "," + std::to_string(n) + ")";
    };
    CountablePoset P = CountablePoset::rule(valid, leq, label);
    P.name = name;
    if (base.is_finite()) P.block = *base.bound();
    return P;
}

// Φ = {(0,(p,n),p)}, Ψ = {(0,p,(p,n))}
PosetIso level_iso(const CountablePoset& base, const CountablePoset& P2) {
    PosetIso iso;
    iso.source = base;
    iso.target = P2;
    MapCode& fw = iso.forward;
    fw.dom = fw.cod = SpaceKind::Filter;
    fw.name = "Phi";
    fw.total = true;
    fw.triples = [base, P2](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index i : P2.valid_below(stage))
            ts.push_back({0, BasicOpen::filter(i), BasicOpen::filter(level_coords(base, i).first)});
        return ts;
    };
    fw.pre = [base, P2](const BasicOpen& V, std::size_t) {
        if (!P2.valid(V.elem)) return std::vector<BasicOpen>{};
        return std::vector<BasicOpen>{BasicOpen::filter(level_coords(base, V.elem).first)};
    };
    MapCode& bw = iso.backward;
    bw.dom = bw.cod = SpaceKind::Filter;
    bw.name = "Psi";
    bw.total = true;
    bw.triples = [base, P2](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index i : P2.valid_below(stage))
            ts.push_back({0, BasicOpen::filter(level_coords(base, i).first), BasicOpen::filter(i)});
        return ts;
    };
    bw.pre = [base, P2](const BasicOpen& V, std::size_t stage) {
        std::vector<BasicOpen> out;
        for (Index i : P2.valid_below(stage))
            if (level_coords(base, i).first == V.elem) out.push_back(BasicOpen::filter(i));
        return out;
    };
    return iso;
}

}  // namespace

PosetIso handyfy_uf(const CountablePoset& P) {
    auto ok = [P](Index p, Index n) {
        for (Index q = 0; q < n; ++q)
            if (P.valid(q) && P.lt(q, p)) return false;
        return true;
    };
    auto below = [P](Index p, Index n, Index q, Index m) { return P.leq(p, q) && n > m; };
    CountablePoset P2 = derived(P, ok, below, "handy(" + P.name + ")");
    P2.handy_hint = true;
    return level_iso(P, P2);
}

PosetIso handyfy_allfilters(const CountablePoset& P) {
    auto ok = [](Index p, Index n) { return p <= n; };
    auto below = [P](Index p, Index n, Index q, Index m) { return P.leq(p, q) && n > m; };
    CountablePoset P2 = derived(P, ok, below, "allfilters(" + P.name + ")");
    P2.handy_hint = true;
    return level_iso(P, P2);
}

PosetIso np_to_npuf(const CountablePoset& P) {
    CountablePoset P2 = CountablePoset::rule([P](Index i) { return P.valid(i); },
                                             [P](Index a, Index b) { return a == b || (P.lt(a, b) && b < a); },
                                             [P](Index i) { return P.label(i); }, P.bound());
    P2.name = "npuf(" + P.name + ")";
    PosetIso iso;
    iso.source = P;
    iso.target = P2;
    for (MapCode* f : {&iso.forward, &iso.backward}) {
        f->dom = f->cod = SpaceKind::Filter;
        f->total = true;
        f->triples = [P](std::size_t stage) {
            std::vector<MapTriple> ts;
            for (Index i : P.valid_below(stage)) ts.push_back({0, BasicOpen::filter(i), BasicOpen::filter(i)});
            return ts;
        };
        f->pre = [P](const BasicOpen& V, std::size_t) {
            return P.valid(V.elem) ? std::vector<BasicOpen>{V} : std::vector<BasicOpen>{};
        };
    }
    iso.forward.name = "f";
    iso.backward.name = "g";
    return iso;
}

PosetIso npuf_to_np(const CountablePoset& P) {
    // element (n,p) is stored at level n of the base element p
    auto ok = [P](Index p, Index n) {
        for (Index q = 0; q <= n; ++q)
            if (P.valid(q) && P.leq(q, p)) return false;
        return true;
    };
    auto below = [P](Index q, Index m, Index p, Index n) { return P.lt(q, p) && m > n; };
    CountablePoset P2 = derived(P, ok, below, "np(" + P.name + ")");
    PosetIso iso;
    iso.source = P;
    iso.target = P2;
    MapCode& fw = iso.forward;
    fw.dom = fw.cod = SpaceKind::Filter;
    fw.name = "f";
    fw.total = true;
    fw.triples = [P, P2](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index i : P2.valid_below(stage))
            ts.push_back({0, BasicOpen::filter(i), BasicOpen::filter(level_coords(P, i).first)});
        return ts;
    };
    fw.pre = [P, P2](const BasicOpen& V, std::size_t) {
        if (!P2.valid(V.elem)) return std::vector<BasicOpen>{};
        return std::vector<BasicOpen>{BasicOpen::filter(level_coords(P, V.elem).first)};
    };
    // g(G) is the upward closure of the base elements occurring in G
    MapCode& bw = iso.backward;
    bw.dom = bw.cod = SpaceKind::Filter;
    bw.name = "g";
    bw.total = true;
    bw.pre = [P, P2](const BasicOpen& V, std::size_t stage) {
        std::vector<BasicOpen> out;
        if (!P.valid(V.elem)) return out;
        for (Index i : P2.valid_below(stage))
            if (P.leq(level_coords(P, i).first, V.elem)) out.push_back(BasicOpen::filter(i));
        return out;
    };
    bw.triples = [P, P2](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index p : P.valid_below(stage))
            for (Index i : P2.valid_below(stage))
                if (P.leq(level_coords(P, i).first, p)) ts.push_back({0, BasicOpen::filter(p), BasicOpen::filter(i)});
        return ts;
    };
    return iso;
}

CountablePoset prune_iterate(const CountablePoset& P, std::size_t k, Index cutoff) {
    // An infinite P gets a margin of k extra cutoffs so that chains below the
    // window can be found; the margin shrinks by one cutoff per round.
    auto reach = [&](std::size_t round) -> Index {
        if (P.is_finite()) return cutoff;
        return cutoff * static_cast<Index>(k + 1 - round);
    };
    std::vector<Index> S = P.valid_below(reach(0));
    for (std::size_t round = 0; round < k; ++round) {
        const Index lim = reach(round + 1);
        std::vector<Index> next;
        for (Index p : S)
            if (p < lim && std::any_of(S.begin(), S.end(), [&](Index q) { return P.lt(q, p); })) next.push_back(p);
        if (P.is_finite() && next.size() == S.size()) break;
        S = std::move(next);
    }
    auto keep = std::make_shared<std::set<Index>>(S.begin(), S.end());
    const Index bound = P.is_finite() ? std::min(*P.bound(), cutoff) : cutoff;
    CountablePoset R = CountablePoset::rule([keep](Index i) { return keep->count(i) > 0; },
                                            [P](Index a, Index b) { return P.leq(a, b); },
                                            [P](Index i) { return P.label(i); }, bound);
    R.name = "pruned(" + P.name + ")";
    return R;
}

Index ProductResult::encode(Index p, Index q) const { return width ? p + q * width : pair_index(p, q); }

std::pair<Index, Index> ProductResult::decode(Index r) const {
    if (width) return {r % width, r / width};
    return unpair_index(r);
}

ProductResult product(const CountablePoset& P, const CountablePoset& Q) {
    ProductResult pr;
    pr.P = P;
    pr.Q = Q;
    std::optional<Index> bound;
    if (P.is_finite() && Q.is_finite()) {
        pr.width = std::max<Index>(*P.bound(), 1);
        bound = *P.bound() * *Q.bound();
    }
    const Index w = pr.width;
    auto dec = [w](Index r) { return w ? std::make_pair(r % w, r / w) : unpair_index(r); };
    pr.R = CountablePoset::rule(
        [P, Q, dec](Index r) {
            auto [p, q] = dec(r);
            return P.valid(p) && Q.valid(q);
        },
        [P, Q, dec](Index a, Index b) {
            auto [p, q] = dec(a);
            auto [p2, q2] = dec(b);
            return P.leq(p, p2) && Q.leq(q, q2);
        },
        [P, Q, dec](Index r) {
            auto [p, q] = dec(r);
            return "(" + P.label(p) + "," + Q.label(q) + ")";
        },
        bound);
    pr.R.name = P.name + "x" + Q.name;
    pr.R.handy_hint = P.handy_hint && Q.handy_hint;
    const CountablePoset R = pr.R;

    MapCode& f = pr.pairing;
    f.dom = SpaceKind::FilterPair;
    f.cod = SpaceKind::Filter;
    f.name = "Phi";
    f.total = true;
    f.triples = [R, dec](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index r : R.valid_below(stage)) {
            auto [p, q] = dec(r);
            ts.push_back({0, BasicOpen::filter(r), BasicOpen::filter_pair(p, q)});
        }
        return ts;
    };
    f.pre = [R, dec](const BasicOpen& V, std::size_t) {
        if (!R.valid(V.elem)) return std::vector<BasicOpen>{};
        auto [p, q] = dec(V.elem);
        return std::vector<BasicOpen>{BasicOpen::filter_pair(p, q)};
    };
    for (int which : {1, 2}) {
        MapCode& g = which == 1 ? pr.proj1 : pr.proj2;
        g.dom = g.cod = SpaceKind::Filter;
        g.name = which == 1 ? "Psi1" : "Psi2";
        g.total = true;
        auto coord = [dec, which](Index r) { return which == 1 ? dec(r).first : dec(r).second; };
        g.triples = [R, coord](std::size_t stage) {
            std::vector<MapTriple> ts;
            for (Index r : R.valid_below(stage)) ts.push_back({0, BasicOpen::filter(coord(r)), BasicOpen::filter(r)});
            return ts;
        };
        g.pre = [R, coord](const BasicOpen& V, std::size_t stage) {
            std::vector<BasicOpen> out;
            for (Index r : R.valid_below(stage))
                if (coord(r) == V.elem) out.push_back(BasicOpen::filter(r));
            return out;
        };
    }
    return pr;
}

FilterStream product_pair(const ProductResult& pr, const FilterStream& F, const FilterStream& G, Index cutoff,
                          std::size_t depth) {
    return image_stream(pr.pairing, view_filter_pair(pr.P, F, pr.Q, G), pr.R, cutoff, depth);
}

FilterStream product_proj(const ProductResult& pr, int which, const FilterStream& H, Index cutoff,
                          std::size_t depth) {
    // the preimage of a factor index lives among product indices, which run past the factor cutoff
    const Index stage = pr.R.is_finite() ? *pr.R.bound() : pair_index(cutoff, cutoff) + 1;
    return image_stream(which == 1 ? pr.proj1 : pr.proj2, view_filter(pr.R, H), which == 1 ? pr.P : pr.Q, cutoff,
                        depth, std::max<Index>(stage, cutoff));
}

namespace {

Index encode_tuple(const std::vector<Index>& t) {
    Index code = t.at(0);
    for (std::size_t i = 1; i < t.size(); ++i) code = pair_index(code, t[i]);
    return pair_index(t.size() - 1, code);
}

std::vector<Index> decode_tuple(Index r) {
    auto [n, code] = unpair_index(r);
    std::vector<Index> t(n + 1);
    for (Index i = n; i > 0; --i) {
        auto [rest, last] = unpair_index(code);
        t[i] = last;
        code = rest;
    }
    t[0] = code;
    return t;
}

}  // namespace

Index ProductSeqResult::encode(const std::vector<Index>& t) const { return encode_tuple(t); }
std::vector<Index> ProductSeqResult::decode(Index r) const { return decode_tuple(r); }

ProductSeqResult product_seq(const std::vector<CountablePoset>& factors, SeqOrder order) {
    ProductSeqResult pr;
    pr.factors = factors;
    const std::size_t L = factors.size();
    auto fs = std::make_shared<std::vector<CountablePoset>>(factors);
    pr.R = CountablePoset::rule(
        [fs, L](Index r) {
            if (unpair_index(r).first >= L) return false;
            const auto t = decode_tuple(r);
            for (std::size_t i = 0; i < t.size(); ++i)
                if (!(*fs)[i].valid(t[i])) return false;
            return true;
        },
        [fs, order](Index a, Index b) {
            if (a == b) return true;
            // b = (p_0..p_n) above a = (p'_0..p'_k)
            const auto s = decode_tuple(a);
            const auto t = decode_tuple(b);
            const std::size_t n = t.size() - 1, k = s.size() - 1;
            if (!(n < k)) return false;
            const std::size_t upto = order == SeqOrder::Inclusive ? n + 1 : n;
            for (std::size_t i = 0; i < upto; ++i)
                if (!(*fs)[i].leq(s[i], t[i])) return false;
            return true;
        },
        [fs](Index r) {
            const auto t = decode_tuple(r);
            std::string out = "(";
            for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + (*fs)[i].label(t[i]);
            return out + ")";
        });
    pr.R.name = "seqproduct";
    const CountablePoset R = pr.R;
    for (std::size_t i = 0; i < L; ++i) {
        MapCode g;
        g.dom = g.cod = SpaceKind::Filter;
        g.name = "proj" + std::to_string(i);
        g.total = true;
        const CountablePoset Pi = factors[i];
        g.pre = [R, Pi, i](const BasicOpen& V, std::size_t stage) {
            std::vector<BasicOpen> out;
            for (Index r : R.valid_below(stage)) {
                const auto t = decode_tuple(r);
                if (t.size() > i && Pi.leq(t[i], V.elem)) out.push_back(BasicOpen::filter(r));
            }
            return out;
        };
        g.triples = [R, Pi, i](std::size_t stage) {
            std::vector<MapTriple> ts;
            for (Index r : R.valid_below(stage)) {
                const auto t = decode_tuple(r);
                if (t.size() <= i) continue;
                for (Index p : Pi.valid_below(stage))
                    if (Pi.leq(t[i], p)) ts.push_back({0, BasicOpen::filter(p), BasicOpen::filter(r)});
            }
            return ts;
        };
        pr.projections.push_back(g);
    }
    return pr;
}

FilterStream product_seq_proj(const ProductSeqResult& pr, std::size_t i, const FilterStream& H, Index cutoff,
                              std::size_t depth) {
    return image_stream(pr.projections.at(i), view_filter(pr.R, H), pr.factors.at(i), cutoff, depth);
}

HandyReport handy_check(const CountablePoset& P, Index window, Index extended) {
    HandyReport rep;
    const auto W = P.valid_below(window);
    const auto E = P.valid_below(extended);
    auto least_below = [&](Index p) -> std::optional<Index> {
        for (Index q : E)
            if (P.lt(q, p)) return q;
        return std::nullopt;
    };
    for (Index p : W)
        if (!least_below(p)) rep.no_predecessor.push_back(p);
    for (Index p : W) {
        std::vector<Index> chain{p};
        while (chain.size() < 64) {
            auto q = least_below(chain.back());
            if (!q) break;
            chain.push_back(*q);
        }
        if (chain.size() < 2) continue;
        for (Index r : W)
            if (std::all_of(chain.begin(), chain.end(), [&](Index c) { return P.lt(r, c); }))
                rep.bounded_chains.emplace_back(r, p);
    }
    return rep;
}

}  // namespace qpk
