#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "qpk/convert.hpp"

namespace qpk {

namespace {

/// Stream whose n-th entry depends on the earlier ones; entries are cached.
FilterStream chain_stream(std::function<Index(const std::vector<Index>&)> next, StreamKind kind) {
    struct State {
        std::mutex mu;
        std::vector<Index> seq;
    };
    auto st = std::make_shared<State>();
    return FilterStream::from_function(
        [st, next](std::size_t n) {
            std::lock_guard<std::mutex> lock(st->mu);
            while (st->seq.size() <= n) st->seq.push_back(next(st->seq));
            return st->seq[n];
        },
        kind);
}

bool hits(const OpenCode& u, const FinSet& x) {
    return std::any_of(u.basics.begin(), u.basics.end(), [&](const BasicOpen& b) { return b.set.subset_of(x); });
}

OpenCode listed(std::vector<BasicOpen> bs, bool complete, Index below) {
    OpenCode u = OpenCode::of(std::move(bs));
    u.complete = complete;
    if (!complete) u.complete_below = below;
    return u;
}

void require_pn(const Pi02Code& X) {
    if (X.kind != SpaceKind::PN) throw Error(ErrorKind::SpaceMismatch, "code must live in P(N)");
    if (!X.complete && X.pairs.empty()) throw Error(ErrorKind::MissingConstituents, "no constituents listed");
}

}  // namespace

// --------------------------------------------------------------------------
// uf_to_pi02

FinSet UfPi02::g(Index p) const {
    std::vector<Index> out;
    for (Index q = 0; q <= p; ++q)
        if (P.valid(q) && P.leq(p, q)) out.push_back(q);
    return FinSet::from(std::move(out));
}

PNPoint UfPi02::point(const FilterStream& F) const {
    UfPi02 self = *this;
    return PNPoint(
        [self, F](std::size_t i) {
            FinSet acc;
            for (std::size_t k = 0; k <= i; ++k) acc = acc.unite(self.g(F.at(k)));
            return acc.upto(i);
        },
        false);
}

FilterStream UfPi02::filter_of(const PointView& x, std::size_t depth) const {
    return image_stream(inverse, x, P, cutoff, depth);
}

UfPi02 uf_to_pi02(const CountablePoset& P, Index cutoff, std::size_t levels) {
    const HandyReport rep = handy_check(P, cutoff, cutoff + std::max<Index>(P.block, 1));
    if (!rep.ok()) {
        std::string why = rep.no_predecessor.empty()
                              ? "a greedy chain from " + P.label(rep.bounded_chains.front().second) + " is bounded"
                              : P.label(rep.no_predecessor.front()) + " has no strict predecessor";
        throw Error(ErrorKind::NotHandy, "poset is not handy on the working prefix: " + why);
    }
    UfPi02 r;
    r.P = P;
    r.cutoff = cutoff;
    const bool complete = P.is_finite() && *P.bound() <= cutoff;
    const auto V = P.valid_below(cutoff);

    // height[e]: length of the longest strict chain above e inside the prefix
    std::map<Index, std::size_t> height;
    std::function<std::size_t(Index)> h = [&](Index e) -> std::size_t {
        auto it = height.find(e);
        if (it != height.end()) return it->second;
        std::size_t best = 0;
        for (Index a : V)
            if (P.lt(e, a)) best = std::max(best, h(a) + 1);
        return height[e] = best;
    };

    for (std::size_t n = 0; n < levels; ++n) {
        std::vector<BasicOpen> bs;
        for (Index e : V) {
            if (h(e) < n) continue;
            bool clear = true;
            for (Index p : V) {
                if (p > n) break;
                if (P.leq(p, e)) {
                    clear = false;
                    break;
                }
            }
            if (clear) bs.push_back(BasicOpen::pn(r.g(e)));
        }
        r.u_pairs.push_back(r.B.pairs.size());
        r.B.pairs.push_back({listed(std::move(bs), complete, cutoff), OpenCode::whole_pn(), n});
    }

    std::vector<BasicOpen> invalid;
    for (Index l = 0; l < cutoff; ++l)
        if (!P.valid(l)) invalid.push_back(BasicOpen::pn(FinSet{l}));
    if (!invalid.empty() || !complete)
        r.B.pairs.push_back({OpenCode::empty(), listed(std::move(invalid), complete, cutoff), 0});

    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = i + 1; j < V.size(); ++j) {
            const Index p = V[i], q = V[j];
            std::vector<BasicOpen> lower;
            for (Index s : V)
                if (P.leq(s, p) && P.leq(s, q)) lower.push_back(BasicOpen::pn(FinSet{s}));
            r.B.pairs.push_back({listed(std::move(lower), complete, cutoff), OpenCode::of({BasicOpen::pn(FinSet{p, q})}), 0});
        }
    r.B.complete = false;

    MapCode& gh = r.ghat;
    gh.dom = SpaceKind::Filter;
    gh.cod = SpaceKind::PN;
    gh.name = "ghat";
    gh.total = true;
    UfPi02 self = r;
    gh.triples = [self](std::size_t stage) {
        std::vector<MapTriple> ts;
        const auto W = self.P.valid_below(stage);
        for (Index s : W) {
            ts.push_back({0, BasicOpen::pn(self.g(s)), BasicOpen::filter(s)});
            for (Index p : W)
                if (self.P.leq(s, p)) ts.push_back({0, BasicOpen::pn(FinSet{p}), BasicOpen::filter(s)});
        }
        return ts;
    };
    gh.pre = [P](const BasicOpen& V, std::size_t stage) {
        std::vector<BasicOpen> out;
        for (Index p : V.set.elems())
            if (!P.valid(p)) return out;
        for (Index s : P.valid_below(stage))
            if (std::all_of(V.set.elems().begin(), V.set.elems().end(), [&](Index p) { return P.leq(s, p); }))
                out.push_back(BasicOpen::filter(s));
        return out;
    };

    MapCode& inv = r.inverse;
    inv.dom = SpaceKind::PN;
    inv.cod = SpaceKind::Filter;
    inv.name = "ghat^-1";
    inv.triples = [P](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index p : P.valid_below(stage)) ts.push_back({0, BasicOpen::filter(p), BasicOpen::pn(FinSet{p})});
        return ts;
    };
    inv.pre = [P](const BasicOpen& V, std::size_t) {
        return P.valid(V.elem) ? std::vector<BasicOpen>{BasicOpen::pn(FinSet{V.elem})} : std::vector<BasicOpen>{};
    };
    return r;
}

std::vector<FinSet> finite_members(const Pi02Code& X, std::size_t stage, Index window,
                                   const std::vector<FinSet>& seeds) {
    // constituents that no subset of the window can satisfy once their closed part is hit
    std::vector<const Pi02Pair*> dead;
    for (const auto& p : X.pairs) {
        if (p.level >= stage) continue;
        bool reachable = !p.B.complete && p.B.complete_below < window;
        for (const auto& b : p.B.basics) {
            const auto m = b.set.max();
            if (!m || *m < window) reachable = true;
        }
        if (!reachable) dead.push_back(&p);
    }
    auto killed = [&](const FinSet& s) {
        return std::any_of(dead.begin(), dead.end(), [&](const Pi02Pair* p) { return hits(p->coA, s); });
    };

    std::set<FinSet> out;
    for (const FinSet& s : seeds) {
        if (s.max() && *s.max() >= window) continue;
        if (killed(s)) continue;
        std::vector<Index> free;
        for (Index z = 0; z < window; ++z)
            if (!s.contains(z) && !killed(s.unite(FinSet{z}))) free.push_back(z);
        if (free.size() > 20)
            throw Error(ErrorKind::TooLarge, std::to_string(free.size()) + " free elements around a seed");
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
            std::vector<Index> xs = s.elems();
            for (std::size_t k = 0; k < free.size(); ++k)
                if (m >> k & 1) xs.push_back(free[k]);
            FinSet x = FinSet::from(std::move(xs));
            if (out.count(x)) continue;
            if (pairs_upto(view_finite(x), X, stage) == Tri::Yes) out.insert(x);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<FinSet> stage_inhabitants(const UfPi02& r, std::size_t stage, Index window) {
    if (stage == 0 || stage > r.u_pairs.size())
        throw Error(ErrorKind::BadArgument, "stage outside the emitted levels");
    std::vector<FinSet> seeds;
    for (const auto& b : r.B.pairs[r.u_pairs[stage - 1]].B.basics) seeds.push_back(b.set);
    return finite_members(r.B, stage, window, seeds);
}

// --------------------------------------------------------------------------
// pi02_to_npuf

Index NpufFromPi02::encode(Index i, Index l, const FinSet& q) const { return triple_index(i, l, q.mask()); }

std::tuple<Index, Index, FinSet> NpufFromPi02::decode(Index t) const {
    auto [i, l, c] = untriple_index(t);
    return {i, l, FinSet::from_mask(c)};
}

namespace {

struct Constituents {
    std::vector<std::vector<FinSet>> qs, rs;
    explicit Constituents(const Pi02Code& X) {
        for (const auto& p : X.pairs) {
            std::vector<FinSet> q, r;
            for (const auto& b : p.coA.basics) q.push_back(b.set);
            for (const auto& b : p.B.basics) r.push_back(b.set);
            qs.push_back(std::move(q));
            rs.push_back(std::move(r));
        }
    }
    /// Least l making (i, l, q) valid, or nullopt when some triggered constraint has no witness.
    std::optional<Index> least_l(Index i, const FinSet& q) const {
        Index need = 0;
        for (Index n = 0; n < qs.size() && pair_index(n, 0) < i; ++n)
            for (Index k = 0; k < qs[n].size() && pair_index(n, k) < i; ++k) {
                if (!qs[n][k].subset_of(q)) continue;
                std::optional<Index> h;
                for (Index j = 0; j < rs[n].size(); ++j)
                    if (rs[n][j].subset_of(q)) {
                        h = j;
                        break;
                    }
                if (!h) return std::nullopt;
                need = std::max(need, *h + 1);
            }
        return need;
    }
};

}  // namespace

PNPoint NpufFromPi02::point(const FilterStream& F) const {
    NpufFromPi02 self = *this;
    return PNPoint(
        [self, F](std::size_t i) {
            FinSet acc;
            for (std::size_t k = 0; k <= i; ++k) acc = acc.unite(std::get<2>(self.decode(F.at(k))));
            return acc.upto(i);
        },
        false);
}

FilterStream NpufFromPi02::filter_of(const ExplicitSubset& G, std::size_t search) const {
    auto cons = std::make_shared<Constituents>(X);
    NpufFromPi02 self = *this;
    auto m_at = std::make_shared<std::vector<Index>>();
    return chain_stream(
        [self, cons, G, search, m_at](const std::vector<Index>& prev) -> Index {
            const Index i = prev.size();
            Index prev_l = 0, start = i;
            if (!prev.empty()) {
                prev_l = std::get<1>(self.decode(prev.back())) + 1;
                start = std::max<Index>(start, m_at->back());
            }
            for (Index m = start; m < start + search && m < 63; ++m) {
                const FinSet q = G.upto(m);
                if (auto l = cons->least_l(i, q)) {
                    m_at->push_back(m);
                    return self.encode(i, std::max(*l, prev_l), q);
                }
            }
            throw Error(ErrorKind::PointOutsideY, "no admissible finite part of " + G.str() + " at step " +
                                                      std::to_string(i));
        },
        StreamKind::Strict);
}

NpufFromPi02 pi02_to_npuf(const Pi02Code& X) {
    require_pn(X);
    NpufFromPi02 r;
    r.X = X;
    auto cons = std::make_shared<Constituents>(X);
    auto dec = [](Index t) {
        auto [i, l, c] = untriple_index(t);
        return std::make_tuple(i, l, FinSet::from_mask(c));
    };
    auto valid = [cons, dec](Index t) {
        auto [i, l, q] = dec(t);
        auto need = cons->least_l(i, q);
        return need && *need <= l;
    };
    auto leq = [dec](Index a, Index b) {
        if (a == b) return true;
        auto [i, l, q] = dec(a);
        auto [j, k, s] = dec(b);
        return l > k && s.subset_of(q) && i >= j;
    };
    auto label = [dec](Index t) {
        auto [i, l, q] = dec(t);
        return "(" + std::to_string(i) + "," + std::to_string(l) + "," + q.str() + ")";
    };
    r.P = CountablePoset::rule(valid, leq, label);
    r.P.name = "npuf(pi02)";

    const CountablePoset P = r.P;
    r.f.dom = SpaceKind::Filter;
    r.f.cod = SpaceKind::PN;
    r.f.name = "f";
    r.f.total = true;
    r.f.triples = [P, dec](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index t : P.valid_below(stage))
            for (Index j : std::get<2>(dec(t)).elems()) ts.push_back({0, BasicOpen::pn(FinSet{j}), BasicOpen::filter(t)});
        return ts;
    };
    r.f.pre = [P, dec](const BasicOpen& V, std::size_t stage) {
        std::vector<BasicOpen> out;
        for (Index t : P.valid_below(stage))
            if (V.set.subset_of(std::get<2>(dec(t)))) out.push_back(BasicOpen::filter(t));
        return out;
    };
    r.g.dom = SpaceKind::PN;
    r.g.cod = SpaceKind::Filter;
    r.g.name = "g";
    r.g.triples = [P, dec](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index t : P.valid_below(stage)) ts.push_back({0, BasicOpen::filter(t), BasicOpen::pn(std::get<2>(dec(t)))});
        return ts;
    };
    r.g.pre = [P, dec](const BasicOpen& V, std::size_t) {
        if (!P.valid(V.elem)) return std::vector<BasicOpen>{};
        return std::vector<BasicOpen>{BasicOpen::pn(std::get<2>(dec(V.elem)))};
    };
    return r;
}

// --------------------------------------------------------------------------
// npuf_to_pi02

Pi02Code npuf_to_pi02(const CountablePoset& P, Index cutoff) {
    Pi02Code X;
    X.kind = SpaceKind::PN;
    const bool complete = P.is_finite() && *P.bound() <= cutoff;
    X.complete = complete;
    const auto V = P.valid_below(cutoff);

    std::vector<BasicOpen> some;
    for (Index k : V) some.push_back(BasicOpen::pn(FinSet{k}));
    X.pairs.push_back({listed(some, complete, cutoff), OpenCode::whole_pn(), 0});

    std::vector<BasicOpen> invalid;
    for (Index l = 0; l < cutoff; ++l)
        if (!P.valid(l)) invalid.push_back(BasicOpen::pn(FinSet{l}));
    if (!invalid.empty() || !complete)
        X.pairs.push_back({OpenCode::empty(), listed(std::move(invalid), complete, cutoff), 0});

    for (Index p : V)
        for (Index q : V) {
            if (p == q) continue;
            const std::size_t level = std::max(p, q);
            if (P.leq(p, q))
                X.pairs.push_back({OpenCode::of({BasicOpen::pn(FinSet{q})}), OpenCode::of({BasicOpen::pn(FinSet{p})}), level});
            if (p < q) {
                std::vector<BasicOpen> lower;
                for (Index s : V)
                    if (P.leq(s, p) && P.leq(s, q)) lower.push_back(BasicOpen::pn(FinSet{s}));
                X.pairs.push_back({listed(std::move(lower), complete, cutoff), OpenCode::of({BasicOpen::pn(FinSet{p, q})}), level});
            }
        }

    for (Index n : V) {
        std::vector<BasicOpen> away;
        for (Index k : V)
            if (!P.leq(n, k)) away.push_back(BasicOpen::pn(FinSet{k}));
        X.pairs.push_back({listed(std::move(away), complete, cutoff), OpenCode::whole_pn(), static_cast<std::size_t>(n)});
    }
    return X;
}

// --------------------------------------------------------------------------
// pi02_to_uf

Index UfFromPi02::encode(Index n, const FinSet& q) const { return pair_index(n, q.mask()); }

std::pair<Index, FinSet> UfFromPi02::decode(Index t) const {
    auto [n, c] = unpair_index(t);
    return {n, FinSet::from_mask(c)};
}

bool UfFromPi02::admissible(Index n, const FinSet& q) const {
    const PointView v = view_finite(q);
    for (std::size_t i = 0; i < X.pairs.size() && i <= n; ++i) {
        const auto& p = X.pairs[i];
        const Tri t = tri_or(member_open(v, p.B, SIZE_MAX), tri_not(member_open(v, p.coA, SIZE_MAX)));
        if (t != Tri::Yes) return false;
    }
    return true;
}

PNPoint UfFromPi02::point(const FilterStream& F) const {
    UfFromPi02 self = *this;
    return PNPoint(
        [self, F](std::size_t i) {
            FinSet acc;
            for (std::size_t k = 0; k <= i; ++k) acc = acc.unite(self.decode(F.at(k)).second);
            return acc.upto(i);
        },
        false);
}

FilterStream UfFromPi02::filter_of(const ExplicitSubset& G, std::size_t search) const {
    UfFromPi02 self = *this;
    auto m_at = std::make_shared<std::vector<Index>>();
    return chain_stream(
        [self, G, search, m_at](const std::vector<Index>& prev) -> Index {
            const Index n = prev.size();
            const Index start = std::max<Index>(n, m_at->empty() ? 0 : m_at->back());
            for (Index m = start; m < start + search && m < 63; ++m) {
                const FinSet q = G.upto(m);
                if (!self.admissible(n, q)) continue;
                const Index t = self.encode(n, q);
                if (self.P.valid(t)) {
                    m_at->push_back(m);
                    return t;
                }
            }
            throw Error(ErrorKind::PointOutsideY,
                        "no surviving finite part of " + G.str() + " at level " + std::to_string(n));
        },
        StreamKind::Strict);
}

UfFromPi02 pi02_to_uf(const Pi02Code& X, std::size_t path_search_depth, Index universe) {
    require_pn(X);
    UfFromPi02 r;
    r.X = X;
    r.depth = path_search_depth;

    Index mentioned = 0;
    bool all_complete = X.complete;
    for (const auto& p : X.pairs)
        for (const OpenCode* u : {&p.B, &p.coA}) {
            all_complete = all_complete && u->complete;
            for (const auto& b : u->basics)
                if (auto m = b.set.max()) mentioned = std::max(mentioned, *m + 1);
        }
    r.universe = universe ? universe : std::max<Index>(mentioned, 1);
    if (r.universe > 20) throw Error(ErrorKind::TooLarge, "extension universe above 20 elements");
    r.exact = all_complete && mentioned <= r.universe && path_search_depth >= X.pairs.size();

    const Index K = X.pairs.size();
    const Index U = r.universe;
    const std::size_t D = path_search_depth;
    UfFromPi02 base = r;  // admissibility only needs X
    auto memo = std::make_shared<std::map<std::tuple<Index, std::uint64_t, std::size_t>, bool>>();
    auto mu = std::make_shared<std::mutex>();
    std::shared_ptr<std::function<bool(Index, std::uint64_t, std::size_t)>> ext =
        std::make_shared<std::function<bool(Index, std::uint64_t, std::size_t)>>();
    std::weak_ptr<std::function<bool(Index, std::uint64_t, std::size_t)>> weak = ext;
    *ext = [base, memo, K, U, weak](Index n, std::uint64_t q, std::size_t d) -> bool {
        if (d == 0 || n + 1 >= K) return true;
        const auto key = std::make_tuple(n, q, d);
        if (auto it = memo->find(key); it != memo->end()) return it->second;
        const std::uint64_t space = ((std::uint64_t{1} << U) - 1) & ~q;
        bool ok = false;
        // supersets of q inside q ∪ {0..U-1}
        for (std::uint64_t add = space;; add = (add - 1) & space) {
            const std::uint64_t q2 = q | add;
            if (base.admissible(n + 1, FinSet::from_mask(q2)) && (*weak.lock())(n + 1, q2, d - 1)) {
                ok = true;
                break;
            }
            if (add == 0) break;
        }
        return (*memo)[key] = ok;
    };
    auto valid = [base, ext, mu, D](Index t) {
        auto [n, c] = unpair_index(t);
        const FinSet q = FinSet::from_mask(c);
        if (!base.admissible(n, q)) return false;
        std::lock_guard<std::mutex> lock(*mu);
        return (*ext)(n, c, D);
    };
    auto leq = [](Index a, Index b) {
        if (a == b) return true;
        auto [n, q] = unpair_index(a);
        auto [m, s] = unpair_index(b);
        return n > m && (s & ~q) == 0;
    };
    auto label = [](Index t) {
        auto [n, c] = unpair_index(t);
        return "(" + std::to_string(n) + "," + FinSet::from_mask(c).str() + ")";
    };
    r.P = CountablePoset::rule(valid, leq, label);
    r.P.name = "uf(pi02)";

    const CountablePoset P = r.P;
    r.f.dom = SpaceKind::Filter;
    r.f.cod = SpaceKind::PN;
    r.f.name = "f";
    r.f.total = true;
    r.f.triples = [P](std::size_t stage) {
        std::vector<MapTriple> ts;
        for (Index t : P.valid_below(stage))
            for (Index j : FinSet::from_mask(unpair_index(t).second).elems())
                ts.push_back({0, BasicOpen::pn(FinSet{j}), BasicOpen::filter(t)});
        return ts;
    };
    r.f.pre = [P](const BasicOpen& V, std::size_t stage) {
        std::vector<BasicOpen> out;
        for (Index t : P.valid_below(stage))
            if (V.set.subset_of(FinSet::from_mask(unpair_index(t).second))) out.push_back(BasicOpen::filter(t));
        return out;
    };
    r.g.dom = SpaceKind::PN;
    r.g.cod = SpaceKind::Filter;
    r.g.name = "g";
    r.g.triples = [P](std::size_t stage) {
        std::vector<MapTriple> ts;
        const auto W = P.valid_below(stage);
        for (Index t : W)
            for (Index s : W)
                if (P.leq(s, t)) ts.push_back({0, BasicOpen::filter(t), BasicOpen::pn(FinSet::from_mask(unpair_index(s).second))});
        return ts;
    };
    r.g.pre = [P](const BasicOpen& V, std::size_t stage) {
        std::vector<BasicOpen> out;
        if (!P.valid(V.elem)) return out;
        for (Index s : P.valid_below(stage))
            if (P.leq(s, V.elem)) out.push_back(BasicOpen::pn(FinSet::from_mask(unpair_index(s).second)));
        return out;
    };
    return r;
}

}  // namespace qpk
