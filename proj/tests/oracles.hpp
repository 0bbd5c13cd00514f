#pragma once
// Brute-force reference implementations used by the unit and acceptance tests.
// Nothing here calls into the code under test except to read plain data.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "qpk/common.hpp"
#include "qpk/poset.hpp"

namespace oracle {

using qpk::Index;
using qpk::Rational;
using Mask = std::uint64_t;

// ---------------------------------------------------------------------------
// Finite preorders as explicit matrices.

struct FinPoset {
    int n = 0;
    std::vector<std::vector<bool>> le;

    bool leq(int a, int b) const { return le[a][b]; }
    bool lt(int a, int b) const { return le[a][b] && !le[b][a]; }
};

inline FinPoset from_poset(const qpk::CountablePoset& P) {
    FinPoset F;
    F.n = static_cast<int>(*P.bound());
    F.le.assign(F.n, std::vector<bool>(F.n));
    for (int a = 0; a < F.n; ++a)
        for (int b = 0; b < F.n; ++b) F.le[a][b] = P.leq(a, b);
    return F;
}

/// Random relation closed under reflexivity and transitivity.
inline FinPoset random_preorder(std::mt19937_64& rng, int n, double density) {
    FinPoset P;
    P.n = n;
    P.le.assign(n, std::vector<bool>(n));
    std::bernoulli_distribution coin(density);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) P.le[a][b] = a == b || coin(rng);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (P.le[a][k] && P.le[k][b]) P.le[a][b] = true;
    return P;
}

inline std::vector<std::pair<Index, Index>> le_pairs(const FinPoset& P) {
    std::vector<std::pair<Index, Index>> out;
    for (int a = 0; a < P.n; ++a)
        for (int b = 0; b < P.n; ++b)
            if (a != b && P.le[a][b]) out.emplace_back(a, b);
    return out;
}

inline bool is_filter(const FinPoset& P, Mask S) {
    if (S == 0) return false;
    for (int a = 0; a < P.n; ++a) {
        if (!(S >> a & 1)) continue;
        for (int b = 0; b < P.n; ++b)
            if (P.le[a][b] && !(S >> b & 1)) return false;
        for (int b = 0; b < P.n; ++b) {
            if (!(S >> b & 1)) continue;
            bool lower = false;
            for (int c = 0; c < P.n && !lower; ++c) lower = (S >> c & 1) && P.le[c][a] && P.le[c][b];
            if (!lower) return false;
        }
    }
    return true;
}

/// No element of P lies strictly below every member.
inline bool is_unbounded(const FinPoset& P, Mask S) {
    for (int r = 0; r < P.n; ++r) {
        bool below_all = true;
        for (int a = 0; a < P.n && below_all; ++a)
            if (S >> a & 1) below_all = P.lt(r, a);
        if (below_all) return false;
    }
    return true;
}

/// Every member has a strictly smaller member.
inline bool is_nonprincipal(const FinPoset& P, Mask S) {
    for (int a = 0; a < P.n; ++a) {
        if (!(S >> a & 1)) continue;
        bool smaller = false;
        for (int b = 0; b < P.n && !smaller; ++b) smaller = (S >> b & 1) && P.lt(b, a);
        if (!smaller) return false;
    }
    return true;
}

/// All filters by scanning every subset (n <= 20).
inline std::vector<Mask> filters(const FinPoset& P) {
    std::vector<Mask> out;
    for (Mask S = 1; S < (Mask{1} << P.n); ++S)
        if (is_filter(P, S)) out.push_back(S);
    return out;
}

inline std::vector<Mask> uf_filters(const FinPoset& P) {
    std::vector<Mask> out;
    for (Mask S : filters(P))
        if (is_unbounded(P, S)) out.push_back(S);
    return out;
}

inline std::vector<Index> members(Mask S) {
    std::vector<Index> out;
    for (Index i = 0; i < 64; ++i)
        if (S >> i & 1) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// The level construction over a finite base: elements (p, n) with no q < n
// strictly below p, (p,n) < (q,m) iff p <= q and n > m. Index n*k + p.

struct Leveled {
    FinPoset base;
    int k = 0;
    bool valid(Index i) const {
        const int p = static_cast<int>(i % k), n = static_cast<int>(i / k);
        for (int q = 0; q < n && q < k; ++q)
            if (base.lt(q, p)) return false;
        return true;
    }
    bool leq(Index i, Index j) const {
        if (i == j) return true;
        const int p = static_cast<int>(i % k), n = static_cast<int>(i / k);
        const int q = static_cast<int>(j % k), m = static_cast<int>(j / k);
        return base.le[p][q] && n > m;
    }
};

/// Traces on the window (levels < window_levels) of the unbounded filters:
/// ↑e ∩ W for e admitting a descending chain down to level `deep` along which
/// the trace never changes.
inline std::set<std::vector<Index>> uf_traces(const FinPoset& base, int window_levels, int deep) {
    Leveled L{base, base.n};
    const Index W = static_cast<Index>(window_levels) * L.k;
    const Index E = static_cast<Index>(deep + 1) * L.k;
    auto trace = [&](Index e) {
        std::vector<Index> t;
        for (Index w = 0; w < W; ++w)
            if (L.valid(w) && L.leq(e, w)) t.push_back(w);
        return t;
    };
    std::map<Index, bool> memo;
    std::function<bool(Index, const std::vector<Index>&)> reaches = [&](Index e, const std::vector<Index>& t) {
        if (e / L.k >= static_cast<Index>(deep)) return true;
        if (auto it = memo.find(e); it != memo.end()) return it->second;
        bool ok = false;
        for (Index f = (e / L.k + 1) * L.k; f < E && !ok; ++f)
            ok = L.valid(f) && L.leq(f, e) && trace(f) == t && reaches(f, t);
        memo[e] = ok;
        return ok;
    };
    std::set<std::vector<Index>> out;
    for (Index e = 0; e < E; ++e) {
        if (!L.valid(e)) continue;
        const auto t = trace(e);
        if (t.empty()) continue;
        if (reaches(e, t)) out.insert(t);
    }
    return out;
}

/// A descending chain realizing the trace of `e`, continued forever through
/// the minimal element it settles on.
inline std::vector<Index> chain_to(const FinPoset& base, Index e, int len) {
    Leveled L{base, base.n};
    std::vector<Index> c{e};
    while (static_cast<int>(c.size()) < len) {
        const Index cur = c.back();
        Index next = cur;
        // prefer staying on the same base element one level down
        const Index same = cur + L.k;
        if (L.valid(same)) {
            next = same;
        } else {
            for (Index f = (cur / L.k + 1) * L.k; f < (cur / L.k + 2) * L.k; ++f)
                if (L.valid(f) && L.leq(f, cur)) {
                    next = f;
                    break;
                }
        }
        if (next == cur) break;
        c.push_back(next);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Frames: expressions as lists of generator masks.

using Expr = std::vector<Mask>;

inline bool holds(Mask x, const Expr& e) {
    for (Mask d : e)
        if ((d & ~x) == 0) return true;
    return false;
}

inline std::vector<Mask> models(unsigned gens, const std::vector<std::pair<Expr, Expr>>& rels) {
    std::vector<Mask> out;
    for (Mask x = 0; x < (Mask{1} << gens); ++x) {
        bool ok = true;
        for (const auto& [u, v] : rels)
            if (holds(x, u) && !holds(x, v)) ok = false;
        if (ok) out.push_back(x);
    }
    return out;
}

inline bool entails(unsigned gens, const std::vector<std::pair<Expr, Expr>>& rels, const Expr& a, const Expr& b) {
    for (Mask x : models(gens, rels))
        if (holds(x, a) && !holds(x, b)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Trees as explicit sets of sequences.

using Node = std::vector<Index>;

/// Random prefix-closed tree over children < branching, depth <= max_depth.
inline std::set<Node> random_tree(std::mt19937_64& rng, Index branching, int max_depth, double keep) {
    std::set<Node> t{Node{}};
    std::bernoulli_distribution coin(keep);
    std::function<void(Node&)> grow = [&](Node& s) {
        if (static_cast<int>(s.size()) >= max_depth) return;
        for (Index i = 0; i < branching; ++i) {
            if (!coin(rng)) continue;
            s.push_back(i);
            t.insert(s);
            grow(s);
            s.pop_back();
        }
    };
    Node root;
    grow(root);
    return t;
}

/// A node of length `depth` exists.
inline bool has_path(const std::set<Node>& t, int depth) {
    return std::any_of(t.begin(), t.end(), [depth](const Node& s) { return static_cast<int>(s.size()) == depth; });
}

// ---------------------------------------------------------------------------
// P(N) distances on bitmasks.

/// d(F,G) = 2^{-min(F \ G)}, 0 when F ⊆ G.
inline Rational d_pn(Mask f, Mask g) {
    const Mask diff = f & ~g;
    if (!diff) return Rational(0);
    int j = 0;
    while (!(diff >> j & 1)) ++j;
    return Rational(1, qpk::BigInt(1) << j);
}

inline Rational d_cantor(Mask a, Mask b) {
    if (a == b) return Rational(0);
    int j = 0;
    while (((a ^ b) >> j & 1) == 0) ++j;
    return Rational(1, qpk::BigInt(1) << j);
}

}  // namespace oracle
