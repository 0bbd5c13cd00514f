#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>

#include "qpk/convert.hpp"

namespace qpk {

namespace {

Index to_index(const BigInt& v) {
    if (v < 0 || v > BigInt(std::numeric_limits<Index>::max()))
        throw Error(ErrorKind::TooLarge, "radius component does not fit an index");
    return static_cast<Index>(v);
}

int bits(Index v) { return v == 0 ? 0 : 64 - __builtin_clzll(v); }

// Ball (a, num/den) packed as: 6 bits |num|, 6 bits |den|, num, den, then a.
// Lengths add up instead of multiplying as nested pairings would.
Index pack_ball(Index a, Index num, Index den) {
    const int ln = bits(num), ld = bits(den), la = bits(a);
    if (ln == 0 || ld == 0) throw Error(ErrorKind::BadArgument, "radius must be positive");
    if (12 + ln + ld + la > 64) throw Error(ErrorKind::TooLarge, "ball does not fit a 64-bit index");
    Index t = static_cast<Index>(ln - 1) | static_cast<Index>(ld - 1) << 6;
    t |= num << 12;
    t |= den << (12 + ln);
    if (a) t |= a << (12 + ln + ld);
    return t;
}

struct Ball {
    Index a, num, den;
};

std::optional<Ball> unpack_ball(Index t) {
    const int ln = static_cast<int>(t & 63) + 1, ld = static_cast<int>(t >> 6 & 63) + 1;
    if (12 + ln + ld > 64) return std::nullopt;
    auto field = [t](int off, int len) {
        return len >= 64 ? t >> off : (t >> off) & ((Index{1} << len) - 1);
    };
    const Index num = field(12, ln), den = field(12 + ln, ld);
    // canonical lengths: leading bits set
    if (bits(num) != ln || bits(den) != ld) return std::nullopt;
    const int off = 12 + ln + ld;
    const Index a = off >= 64 ? 0 : t >> off;
    return Ball{a, num, den};
}

}  // namespace

// --------------------------------------------------------------------------
// qm_to_uf

Index QmUf::encode(Index a, const Rational& r) const {
    if (r <= 0) throw Error(ErrorKind::BadArgument, "radius must be positive");
    return pack_ball(a, to_index(boost::multiprecision::numerator(r)), to_index(boost::multiprecision::denominator(r)));
}

std::pair<Index, Rational> QmUf::decode(Index t) const {
    auto b = unpack_ball(t);
    if (!b) throw Error(ErrorKind::BadArgument, "index " + std::to_string(t) + " codes no ball");
    return {b->a, Rational(BigInt(b->num), BigInt(b->den))};
}

FilterStream QmUf::phi(const QMPoint& x) const {
    QmUf self = *this;
    return FilterStream::from_function(
        [self, x](std::size_t i) { return self.encode(x.at(i), pow2neg(static_cast<long>(i) - 1)); },
        StreamKind::Strict);
}

std::vector<Index> QmUf::refine(const FilterStream& F, std::size_t length, std::size_t search) const {
    std::vector<Index> out;
    if (length == 0) return out;
    out.push_back(F.at(0));
    std::size_t k = 0;
    for (std::size_t n = 0; out.size() < length; ++n) {
        const Index cur = out.back();
        const Index next = F.at(n + 1);
        const Rational cap = pow2neg(static_cast<long>(n) + 1);
        bool found = false;
        // candidates only move forward: later entries sit below earlier ones
        for (; k < search; ++k) {
            const Index t = F.at(k);
            if (decode(t).second < cap && P.leq(t, cur) && P.leq(t, next)) {
                found = true;
                break;
            }
        }
        if (!found)
            throw Error(ErrorKind::NotLeftCauchy,
                        "radii of the filter stay above 2^-" + std::to_string(n + 1) + " within the search");
        out.push_back(F.at(k));
    }
    return out;
}

QMPoint QmUf::psi(const FilterStream& F, std::size_t search) const {
    if (!space.limit) throw Error(ErrorKind::NoLimitOperator, "space " + space.name + " has no limit operator");
    struct State {
        std::mutex mu;
        std::vector<Index> chain;
    };
    auto st = std::make_shared<State>();
    QmUf self = *this;
    Sequence b = [self, F, search, st](std::size_t n) {
        std::lock_guard<std::mutex> lock(st->mu);
        if (st->chain.size() <= n) st->chain = self.refine(F, n + 1, search);
        return self.decode(st->chain[n]).first;
    };
    return space.limit(b);
}

QmUf qm_to_uf(const QMSpaceCode& space) {
    if (!space.exact()) throw Error(ErrorKind::InexactMetric, "space " + space.name + " has no exact distance");
    QmUf r;
    r.space = space;
    auto valid = [space](Index t) {
        auto b = unpack_ball(t);
        return b && std::gcd(b->num, b->den) == 1 && space.valid(b->a) && (!space.bound || b->a < *space.bound);
    };
    auto lt = [space](Index x, Index y) {
        auto p = unpack_ball(x), q = unpack_ball(y);
        if (!p || !q) return false;
        return Rational(BigInt(q->num), BigInt(q->den)) - space.d_exact(q->a, p->a) > Rational(BigInt(p->num), BigInt(p->den));
    };
    auto label = [space](Index t) {
        auto b = unpack_ball(t);
        if (!b) return std::string("?");
        return "(" + space.label_of(b->a) + "," + rational_str(Rational(BigInt(b->num), BigInt(b->den))) + ")";
    };
    r.P = CountablePoset::rule(valid, [lt](Index x, Index y) { return x == y || lt(x, y); }, label);
    r.P.name = "uf(" + space.name + ")";
    return r;
}

// --------------------------------------------------------------------------
// Dense sequences

const char* to_string(DenseKind k) {
    switch (k) {
        case DenseKind::Closed: return "closed";
        case DenseKind::Gdelta: return "gdelta";
        case DenseKind::Sigma2: return "sigma2";
    }
    return "?";
}

DenseKind parse_dense_kind(const std::string& s) {
    if (s == "closed") return DenseKind::Closed;
    if (s == "gdelta") return DenseKind::Gdelta;
    if (s == "sigma2") return DenseKind::Sigma2;
    throw Error(ErrorKind::UnknownName, "unknown set kind '" + s + "'");
}

namespace {

bool is_whole(const BorelCode& c) {
    if (c.rank != 1 || c.polarity != 1) return false;
    return std::any_of(c.open.basics.begin(), c.open.basics.end(), [](const BasicOpen& b) { return b.set.empty(); });
}

ExplicitSubset with_tail(const FinSet& s, Index bound) {
    ExplicitSubset x;
    x.prefix.assign(bound, false);
    for (Index k : s.elems()) x.prefix[k] = true;
    x.cycle = {true};
    return x;
}

}  // namespace

std::optional<std::vector<ExplicitSubset>> dense_sequence(const BorelCode& code, DenseKind kind, Index bound) {
    if (code.kind != SpaceKind::PN) throw Error(ErrorKind::SpaceMismatch, "dense sequences live in P(N)");
    if (bound > 16) throw Error(ErrorKind::TooLarge, "dense scale above 2^-16");
    switch (kind) {
        case DenseKind::Closed:
            if (code.polarity != 0 || code.rank != 1) throw Error(ErrorKind::KindMismatch, "code is not a closed set");
            break;
        case DenseKind::Gdelta:
            if (code.polarity != 0 || code.rank != 2) throw Error(ErrorKind::KindMismatch, "code is not a G_delta set");
            for (const auto& [v, w] : code.pieces)
                if (!is_whole(v) || w.rank != 1 || w.polarity != 1)
                    throw Error(ErrorKind::KindMismatch, "G_delta pieces must be whole minus an open set");
            break;
        case DenseKind::Sigma2:
            if (code.polarity != 1 || code.rank != 2) throw Error(ErrorKind::KindMismatch, "code is not a Sigma^0_2 set");
            break;
    }

    std::vector<ExplicitSubset> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << bound); ++m) {
        const FinSet s = FinSet::from_mask(m);
        if (kind == DenseKind::Gdelta) {
            const ExplicitSubset x = with_tail(s, bound);
            bool keep = true;
            for (const auto& [v, w] : code.pieces) {
                const Tri t = member_open(view_explicit(x), w.open, SIZE_MAX);
                if (t == Tri::Unknown) return std::nullopt;
                if (t == Tri::No) {
                    keep = false;
                    break;
                }
            }
            if (keep) out.push_back(x);
            continue;
        }
        const Tri t = member_at(view_finite(s), code, SIZE_MAX);
        if (t == Tri::Unknown) return std::nullopt;
        if (t == Tri::Yes) out.push_back(ExplicitSubset::finite(s));
    }
    return out;
}

std::optional<std::vector<ExplicitSubset>> dense_sequence(const Pi02Code& code, DenseKind kind, Index bound) {
    if (kind == DenseKind::Sigma2) throw Error(ErrorKind::KindMismatch, "a Pi^0_2 code is not a Sigma^0_2 set");
    if (!code.complete) throw Error(ErrorKind::MissingConstituents, "constituent list is not complete");
    if (kind == DenseKind::Closed) {
        std::vector<BasicOpen> out;
        for (const auto& p : code.pairs) {
            if (!p.B.basics.empty() || !p.B.complete)
                throw Error(ErrorKind::KindMismatch, "constituent with an open part is not closed");
            out.insert(out.end(), p.coA.basics.begin(), p.coA.basics.end());
        }
        OpenCode u = OpenCode::of(std::move(out));
        for (const auto& p : code.pairs)
            if (!p.coA.complete) {
                u.complete_below = u.complete ? p.coA.complete_below : std::min(u.complete_below, p.coA.complete_below);
                u.complete = false;
            }
        return dense_sequence(BorelCode::closed_set(std::move(u)), kind, bound);
    }
    return dense_sequence(to_borel(code), kind, bound);
}

QMSpaceCode pi02_to_qm(const Pi02Code& X, const std::vector<ExplicitSubset>& dense,
                       const InverseDistanceOracle& oracle) {
    if (!oracle) throw Error(ErrorKind::OracleMissing, "no distance oracle for the constituents");
    if (!X.disjoint) throw Error(ErrorKind::DisjointnessUnknown, "constituents not known to be disjoint unions");
    if (dense.empty()) throw Error(ErrorKind::BadArgument, "empty dense sequence");
    QMSpaceCode s;
    s.name = "qm(pi02)";
    const Index n = dense.size();
    s.bound = n;
    s.valid = [n](Index a) { return a < n; };
    s.d_approx = [X, dense, oracle](Index a, Index b, int precision) {
        return dprime(X, oracle, dense.at(a), dense.at(b), precision);
    };
    s.label = [dense](Index a) { return dense.at(a).str(); };
    return s;
}

}  // namespace qpk
