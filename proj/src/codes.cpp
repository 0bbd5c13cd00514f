#include "qpk/codes.hpp"

#include <algorithm>
#include <set>

namespace qpk {

const char* to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::PN: return "pn";
        case SpaceKind::Filter: return "filter";
        case SpaceKind::FilterPair: return "filter-pair";
        case SpaceKind::QM: return "qm";
    }
    return "?";
}

BasicOpen BasicOpen::pn(FinSet s) {
    BasicOpen b;
    b.kind = SpaceKind::PN;
    b.set = std::move(s);
    return b;
}

BasicOpen BasicOpen::filter(Index p) {
    BasicOpen b;
    b.kind = SpaceKind::Filter;
    b.elem = p;
    return b;
}

BasicOpen BasicOpen::filter_pair(Index p, Index q) {
    BasicOpen b;
    b.kind = SpaceKind::FilterPair;
    b.elem = pair_index(p, q);
    return b;
}

BasicOpen BasicOpen::ball(Index center, Rational r) {
    BasicOpen b;
    b.kind = SpaceKind::QM;
    b.elem = center;
    b.radius = std::move(r);
    return b;
}

bool BasicOpen::operator==(const BasicOpen& o) const {
    return kind == o.kind && set == o.set && elem == o.elem && radius == o.radius;
}

bool BasicOpen::operator<(const BasicOpen& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (elem != o.elem) return elem < o.elem;
    if (!(set == o.set)) return set < o.set;
    return radius < o.radius;
}

std::string BasicOpen::str() const {
    switch (kind) {
        case SpaceKind::PN: return "N" + set.str();
        case SpaceKind::Filter: return "N(" + std::to_string(elem) + ")";
        case SpaceKind::FilterPair: {
            auto [p, q] = unpair_index(elem);
            return "N(" + std::to_string(p) + "," + std::to_string(q) + ")";
        }
        case SpaceKind::QM: return "B(" + std::to_string(elem) + "," + rational_str(radius) + ")";
    }
    return "?";
}

OpenCode OpenCode::of(std::vector<BasicOpen> bs) {
    OpenCode u;
    if (!bs.empty()) u.kind = bs.front().kind;
    u.basics = std::move(bs);
    return u;
}

OpenCode OpenCode::empty(SpaceKind k) {
    OpenCode u;
    u.kind = k;
    return u;
}

OpenCode OpenCode::whole_pn() { return of({BasicOpen::pn({})}); }

PointView view_explicit(const ExplicitSubset& s) {
    PointView v;
    v.kind = SpaceKind::PN;
    v.in_basic = [s](const BasicOpen& b, std::size_t) {
        for (Index k : b.set.elems())
            if (!s.contains(k)) return Tri::No;
        return Tri::Yes;
    };
    if (s.is_finite()) v.support_bound = s.horizon();
    return v;
}

PointView view_finite(const FinSet& s) {
    PointView v;
    v.kind = SpaceKind::PN;
    v.in_basic = [s](const BasicOpen& b, std::size_t) { return b.set.subset_of(s) ? Tri::Yes : Tri::No; };
    v.support_bound = s.max() ? *s.max() + 1 : 0;
    return v;
}

PointView view_pn_point(const PNPoint& x) {
    PointView v;
    v.kind = SpaceKind::PN;
    v.in_basic = [x](const BasicOpen& b, std::size_t stage) {
        if (b.set.subset_of(x.at(stage))) return Tri::Yes;
        if (x.exact() && b.set.max() && *b.set.max() <= stage) return Tri::No;
        return Tri::Unknown;
    };
    return v;
}

BorelCode BorelCode::empty(SpaceKind k) {
    BorelCode c;
    c.kind = k;
    c.open = OpenCode::empty(k);
    return c;
}

BorelCode BorelCode::whole(SpaceKind k) {
    BorelCode c = empty(k);
    c.polarity = 0;
    return c;
}

BorelCode BorelCode::open_set(OpenCode u) {
    BorelCode c;
    c.kind = u.kind;
    c.open = std::move(u);
    return c;
}

BorelCode BorelCode::closed_set(OpenCode u) {
    BorelCode c = open_set(std::move(u));
    c.polarity = 0;
    return c;
}

bool BorelCode::operator==(const BorelCode& o) const {
    if (polarity != o.polarity || rank != o.rank || kind != o.kind) return false;
    if (open.complete != o.open.complete || open.complete_below != o.open.complete_below) return false;
    if (open.basics != o.open.basics) return false;
    return pieces == o.pieces;
}

std::string BorelCode::str() const {
    std::string out = "(" + std::to_string(polarity) + "," + std::to_string(rank) + ",<";
    if (rank == 1) {
        for (std::size_t i = 0; i < open.basics.size(); ++i) out += (i ? "," : "") + open.basics[i].str();
    } else {
        const int tv = polarity, tw = 1 - polarity;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            out += (i ? "," : "");
            out += "((" + std::to_string(tv) + "," + pieces[i].first.str() + "),(" + std::to_string(tw) + "," +
                   pieces[i].second.str() + "))";
        }
    }
    return out + ">)";
}

void validate(const BorelCode& c, int max_rank) {
    if (c.polarity != 0 && c.polarity != 1) throw Error(ErrorKind::BadArgument, "polarity must be 0 or 1");
    if (c.rank < 1 || c.rank > max_rank) throw Error(ErrorKind::BadArgument, "rank out of range");
    if (c.rank == 1) {
        if (!c.pieces.empty()) throw Error(ErrorKind::BadArgument, "rank-1 code with sub-codes");
        for (const auto& b : c.open.basics)
            if (b.kind != c.kind) throw Error(ErrorKind::SpaceMismatch, "basic open of another space");
        return;
    }
    if (!c.open.basics.empty()) throw Error(ErrorKind::BadArgument, "higher-rank code with basic opens");
    for (const auto& [v, w] : c.pieces) {
        if (v.rank != c.rank - 1 || w.rank != c.rank - 1)
            throw Error(ErrorKind::BadArgument, "sub-code rank must be one less");
        if (v.polarity != 1 || w.polarity != 1) throw Error(ErrorKind::BadArgument, "sub-codes must be positive");
        if (v.kind != c.kind || w.kind != c.kind) throw Error(ErrorKind::SpaceMismatch, "sub-code of another space");
        validate(v, max_rank);
        validate(w, max_rank);
    }
}

BorelCode complement(const BorelCode& c) {
    BorelCode d = c;
    d.polarity = 1 - c.polarity;
    return d;
}

static void check_kind(const PointView& x, SpaceKind k) {
    if (x.kind != k) throw Error(ErrorKind::SpaceMismatch, std::string("point in ") + to_string(x.kind) +
                                                            ", code over " + to_string(k));
}

// Basic lists of open codes are finite and always consulted in full; the
// stage bounds the sequences of pieces and Π⁰₂ pairs.
Tri member_open(const PointView& x, const OpenCode& u, std::size_t stage) {
    bool unknown = false;
    for (const auto& b : u.basics) {
        check_kind(x, b.kind);
        const Tri t = x.in_basic(b, stage);
        if (t == Tri::Yes) return Tri::Yes;
        if (t == Tri::Unknown) unknown = true;
    }
    if (unknown) return Tri::Unknown;
    if (u.complete) return Tri::No;
    if (x.support_bound && *x.support_bound <= u.complete_below) return Tri::No;
    return Tri::Unknown;
}

Tri member_at(const PointView& x, const BorelCode& c, std::size_t stage) {
    check_kind(x, c.kind);
    Tri t;
    if (c.rank == 1) {
        t = member_open(x, c.open, stage);
    } else {
        t = Tri::No;
        const std::size_t upto = std::min(stage, c.pieces.size());
        for (std::size_t i = 0; i < upto && t != Tri::Yes; ++i) {
            const auto& [v, w] = c.pieces[i];
            t = tri_or(t, tri_and(member_at(x, v, stage), tri_not(member_at(x, w, stage))));
        }
        if (t == Tri::No && upto < c.pieces.size()) t = Tri::Unknown;
    }
    return c.polarity == 1 ? t : tri_not(t);
}

Tri member_at(const PointView& x, const Pi02Code& c, std::size_t stage) {
    check_kind(x, c.kind);
    bool all_seen = c.complete;
    bool unknown = false;
    for (const auto& p : c.pairs) {
        if (p.level >= stage) {
            all_seen = false;
            continue;
        }
        const Tri t = tri_or(member_open(x, p.B, stage), tri_not(member_open(x, p.coA, stage)));
        if (t == Tri::No) return Tri::No;
        if (t == Tri::Unknown) unknown = true;
    }
    return (all_seen && !unknown) ? Tri::Yes : Tri::Unknown;
}

Tri pairs_upto(const PointView& x, const Pi02Code& c, std::size_t stage) {
    check_kind(x, c.kind);
    Tri acc = Tri::Yes;
    for (const auto& p : c.pairs) {
        if (p.level >= stage) continue;
        acc = tri_and(acc, tri_or(member_open(x, p.B, stage), tri_not(member_open(x, p.coA, stage))));
        if (acc == Tri::No) return acc;
    }
    return acc;
}

bool closed_violation(const PointView& x, const Pi02Code& c, std::size_t stage) {
    for (const auto& p : c.pairs) {
        if (p.level >= stage || !p.B.basics.empty()) continue;
        if (member_open(x, p.coA, stage) == Tri::Yes) return true;
    }
    return false;
}

BorelCode to_borel(const Pi02Code& c) {
    // complement of ⋃ (coA_i \ B_i)
    BorelCode out;
    out.kind = c.kind;
    out.polarity = 0;
    out.rank = 2;
    out.open = OpenCode::empty(c.kind);
    for (const auto& p : c.pairs) out.pieces.emplace_back(BorelCode::open_set(p.coA), BorelCode::open_set(p.B));
    return out;
}

Pi02Code pi02_conjoin(const std::vector<Pi02Code>& cs) {
    Pi02Code out;
    if (!cs.empty()) out.kind = cs.front().kind;
    out.disjoint = true;
    for (const auto& c : cs) {
        if (c.kind != out.kind) throw Error(ErrorKind::SpaceMismatch, "conjoining codes over different spaces");
        out.pairs.insert(out.pairs.end(), c.pairs.begin(), c.pairs.end());
        out.complete = out.complete && c.complete;
        out.disjoint = out.disjoint && c.disjoint;
    }
    if (cs.empty()) out.disjoint = true;
    return out;
}

Index tree_cell(Index i, Index j) { return pair_index(i, j); }

TreeEncoding tree_to_pi02(std::function<RuleTree(Index)> trees, Index roots, Index bound, std::size_t depth) {
    TreeEncoding enc;
    enc.trees = trees;
    enc.roots = roots;
    enc.bound = bound;
    enc.depth = depth;
    Pi02Code& Y = enc.Y;
    Y.complete = false;
    // D_τ for the minimal τ outside T, τ = n⌢σ with σ ∈ T_n checked up to length depth
    std::vector<Index> tau;
    std::function<void(const RuleTree&)> walk = [&](const RuleTree& t) {
        // tau is in T here; try each child
        if (tau.size() > depth) return;
        for (Index i = 0; i < bound; ++i) {
            tau.push_back(i);
            const std::vector<Index> sigma(tau.begin() + 1, tau.end());
            if (t(sigma)) {
                walk(t);
            } else {
                std::vector<Index> cells;
                for (std::size_t j = 0; j < tau.size(); ++j) cells.push_back(tree_cell(tau[j], j));
                Y.pairs.push_back({OpenCode::empty(), OpenCode::of({BasicOpen::pn(FinSet::from(cells))}),
                                   tau.size() - 1});
            }
            tau.pop_back();
        }
    };
    for (Index n = 0; n < roots; ++n) {
        const RuleTree t = trees(n);
        tau = {n};
        if (!t({})) {
            Y.pairs.push_back({OpenCode::empty(), OpenCode::of({BasicOpen::pn({tree_cell(n, 0)})}), 0});
            continue;
        }
        walk(t);
    }
    // E_j: column j is occupied
    for (Index j = 0; j <= depth; ++j) {
        OpenCode e;
        for (Index i = 0; i < bound; ++i) e.basics.push_back(BasicOpen::pn({tree_cell(i, j)}));
        e.complete = false;
        e.complete_below = tree_cell(bound, j);
        Y.pairs.push_back({e, OpenCode::whole_pn(), j});
    }
    std::stable_sort(Y.pairs.begin(), Y.pairs.end(),
                     [](const Pi02Pair& a, const Pi02Pair& b) { return a.level < b.level; });
    return enc;
}

Tri tree_nonempty_at(const TreeEncoding& enc, Index n, std::size_t k) {
    // candidates are graphs of sequences of length k with entries below bound
    std::vector<Index> cells{tree_cell(n, 0)};
    const std::size_t stage = k + 1;
    std::function<bool(std::size_t)> search = [&](std::size_t len) {
        const PointView x = view_finite(FinSet::from(cells));
        if (closed_violation(x, enc.Y, stage)) return false;
        if (len == k) return member_at(x, enc.Y, stage) != Tri::No;
        for (Index i = 0; i < enc.bound; ++i) {
            cells.push_back(tree_cell(i, len + 1));
            const bool ok = search(len + 1);
            cells.pop_back();
            if (ok) return true;
        }
        return false;
    };
    return search(0) ? Tri::Yes : Tri::No;
}

MapCode MapCode::empty(SpaceKind dom, SpaceKind cod) {
    MapCode f;
    f.dom = dom;
    f.cod = cod;
    f.name = "empty";
    f.finite = true;
    f.triples = [](std::size_t) { return std::vector<MapTriple>{}; };
    return f;
}

MapCode MapCode::identity(SpaceKind k) {
    MapCode f;
    f.dom = f.cod = k;
    f.name = "id";
    f.total = true;
    f.pre = [](const BasicOpen& V, std::size_t) { return std::vector<BasicOpen>{V}; };
    f.triples = [k](std::size_t stage) {
        std::vector<MapTriple> ts;
        if (k == SpaceKind::PN) {
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << std::min<std::size_t>(stage, 10)); ++m)
                ts.push_back({0, BasicOpen::pn(FinSet::from_mask(m)), BasicOpen::pn(FinSet::from_mask(m))});
        } else {
            for (Index p = 0; p < stage; ++p) {
                BasicOpen b;
                b.kind = k;
                b.elem = p;
                ts.push_back({0, b, b});
            }
        }
        return ts;
    };
    return f;
}

MapCode MapCode::from_triples(SpaceKind dom, SpaceKind cod, std::vector<MapTriple> ts) {
    MapCode f;
    f.dom = dom;
    f.cod = cod;
    f.name = "explicit";
    f.finite = true;
    f.triples = [ts = std::move(ts)](std::size_t) { return ts; };
    return f;
}

OpenCode preimage(const MapCode& f, const BasicOpen& V, std::size_t stage) {
    if (V.kind != f.cod) throw Error(ErrorKind::SpaceMismatch, "basic open not in the codomain");
    OpenCode u = OpenCode::empty(f.dom);
    std::set<BasicOpen> seen;
    if (f.pre) {
        for (auto& b : f.pre(V, stage))
            if (seen.insert(b).second) u.basics.push_back(b);
    } else {
        for (auto& t : f.triples(stage))
            if (t.cod == V && seen.insert(t.dom).second) u.basics.push_back(t.dom);
    }
    u.complete = f.finite;
    return u;
}

std::vector<BasicOpen> apply(const MapCode& f, const PointView& x, std::size_t stage) {
    if (x.kind != f.dom) throw Error(ErrorKind::SpaceMismatch, "point not in the domain");
    std::set<BasicOpen> out;
    for (const auto& t : f.triples(stage))
        if (!out.count(t.cod) && x.in_basic(t.dom, stage) == Tri::Yes) out.insert(t.cod);
    return {out.begin(), out.end()};
}

DomainVerdict in_domain_at(const MapCode& f, const PointView& x, std::size_t stage) {
    DomainVerdict v;
    const auto image = apply(f, x, stage);
    if (f.disjoint) {
        for (std::size_t i = 0; i < image.size(); ++i)
            for (std::size_t j = i + 1; j < image.size(); ++j)
                if (f.disjoint(image[i], image[j])) {
                    v.verdict = Tri::No;
                    v.conflict = std::make_pair(image[i], image[j]);
                    return v;
                }
    }
    if (f.total) {
        v.verdict = Tri::Yes;
    } else if (f.finite && image.empty() && f.triples(stage).empty() && f.cod == SpaceKind::PN) {
        // the bottom point ∅ of P(N)
        v.verdict = Tri::Yes;
    }
    return v;
}

MapCode compose(const MapCode& f, const MapCode& g) {
    if (f.cod != g.dom) throw Error(ErrorKind::SpaceMismatch, "cannot compose: codomain and domain differ");
    MapCode h;
    h.dom = f.dom;
    h.cod = g.cod;
    h.name = g.name + "∘" + f.name;
    h.finite = f.finite && g.finite;
    h.total = f.total && g.total;
    h.disjoint = g.disjoint;
    h.triples = [f, g](std::size_t stage) {
        std::vector<MapTriple> out;
        const auto gs = g.triples(stage);
        const auto fs = f.triples(stage);
        for (const auto& tg : gs)
            for (const auto& tf : fs)
                if (tf.cod == tg.dom) out.push_back({pair_index(tf.n, tg.n), tg.cod, tf.dom});
        return out;
    };
    if (f.pre && g.pre) {
        h.pre = [f, g](const BasicOpen& W, std::size_t stage) {
            std::vector<BasicOpen> out;
            std::set<BasicOpen> seen;
            for (const auto& v : g.pre(W, stage))
                for (auto& u : f.pre(v, stage))
                    if (seen.insert(u).second) out.push_back(u);
            return out;
        };
    }
    return h;
}

}  // namespace qpk
