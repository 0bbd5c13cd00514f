#include "qpk/frames.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace qpk {

GenSet Expression::support() const {
    GenSet s = 0;
    for (GenSet d : disjuncts) s |= d;
    return s;
}

Expression normalize(const Expression& a) {
    std::vector<GenSet> d = a.disjuncts;
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    std::vector<GenSet> out;
    for (GenSet p : d) {
        bool subsumed = false;
        for (GenSet q : d)
            if (q != p && (q & ~p) == 0) {
                subsumed = true;
                break;
            }
        if (!subsumed) out.push_back(p);
    }
    return Expression{std::move(out)};
}

bool leq(const Expression& a, const Expression& b) {
    for (GenSet p : a.disjuncts) {
        bool found = false;
        for (GenSet q : b.disjuncts)
            if ((q & ~p) == 0) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

Expression meet(const Expression& a, const Expression& b) {
    Expression out;
    for (GenSet p : a.disjuncts)
        for (GenSet q : b.disjuncts) out.disjuncts.push_back(p | q);
    return normalize(out);
}

Expression join(const Expression& a, const Expression& b) {
    Expression out = a;
    out.disjuncts.insert(out.disjuncts.end(), b.disjuncts.begin(), b.disjuncts.end());
    return normalize(out);
}

std::string Presentation::gen_name(unsigned g) const {
    if (g < names.size() && !names[g].empty()) return names[g];
    return "g" + std::to_string(g);
}

std::string Presentation::show(const Expression& e) const {
    if (e.disjuncts.empty()) return "bot";
    std::string out;
    for (std::size_t k = 0; k < e.disjuncts.size(); ++k) {
        if (k) out += " | ";
        GenSet p = e.disjuncts[k];
        if (p == 0) {
            out += "top";
            continue;
        }
        bool first = true;
        for (unsigned g = 0; g < 64; ++g)
            if (p >> g & 1) {
                if (!first) out += " & ";
                out += gen_name(g);
                first = false;
            }
    }
    return out;
}

GenSet FramePoint::at(std::size_t i) const {
    if (stages.empty()) return 0;
    return stages[std::min(i, stages.size() - 1)];
}

bool holds_in(GenSet x, const Expression& e) {
    for (GenSet p : e.disjuncts)
        if ((p & ~x) == 0) return true;
    return false;
}

Sat point_sat(const FramePoint& x, const Expression& e, std::size_t stage) {
    if (holds_in(x.at(stage), e)) return Sat::Sat;
    if (e.disjuncts.empty()) return Sat::Unsat;
    if (x.total && stage + 1 >= x.stages.size()) return Sat::Unsat;
    return Sat::Unknown;
}

bool satisfies_relations(const Presentation& pres, GenSet x) {
    for (const auto& [u, v] : pres.rels)
        if (holds_in(x, u) && !holds_in(x, v)) return false;
    return true;
}

std::vector<GenSet> enumerate_points(const Presentation& pres, unsigned max_gens) {
    if (pres.gens > max_gens)
        throw Error(ErrorKind::TooLarge, "point enumeration over " + std::to_string(pres.gens) + " generators");
    std::vector<GenSet> out;
    for (GenSet x = 0; x < (GenSet{1} << pres.gens); ++x)
        if (satisfies_relations(pres, x)) out.push_back(x);
    return out;
}

std::optional<FramePoint> countermodel(const Presentation& pres, const Expression& a, const Expression& b) {
    std::set<GenSet> dead;
    std::vector<GenSet> path;
    std::function<bool(GenSet)> grow = [&](GenSet p) -> bool {
        if (holds_in(p, b) || dead.count(p)) return false;
        path.push_back(p);
        for (const auto& [u, v] : pres.rels) {
            if (!holds_in(p, u) || holds_in(p, v)) continue;
            for (GenSet w : v.disjuncts)
                if (grow(p | w)) return true;
            path.pop_back();
            dead.insert(p);
            return false;
        }
        return true;
    };
    for (GenSet p : a.disjuncts)
        if (grow(p)) return FramePoint{path, true};
    return std::nullopt;
}

const char* to_string(Rule r) {
    switch (r) {
        case Rule::Base: return "Base";
        case Rule::Cut: return "Cut";
        case Rule::LJoin: return "LJoin";
        case Rule::RJoin: return "RJoin";
    }
    return "?";
}

std::size_t ProofTree::height() const {
    std::size_t h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
}

std::size_t ProofTree::size() const {
    std::size_t s = 1;
    for (const auto& c : children) s += c.size();
    return s;
}

namespace {

/// Relation index closing (a, b) as a relation instance, or -1.
int relation_instance(const Presentation& pres, const Expression& a, const Expression& b) {
    for (std::size_t i = 0; i < pres.rels.size(); ++i) {
        const auto& [u, v] = pres.rels[i];
        if (leq(a, u) && leq(b, v) && leq(meet(a, v), b)) return static_cast<int>(i);
    }
    return -1;
}

using Row = std::vector<std::uint64_t>;

bool test(const Row& r, int j) { return r[j >> 6] >> (j & 63) & 1; }
void set(Row& r, int j) { r[j >> 6] |= std::uint64_t{1} << (j & 63); }

}  // namespace

struct FrameProver::Universe {
    std::vector<Expression> elems;
    std::map<Expression, int> index;
    /// index of each single-disjunct expression of elems[k]
    std::vector<std::vector<int>> singles;
    bool full = false;

    // saturation
    bool saturated = false;
    std::vector<std::vector<char>> rel;
    struct Why {
        char kind = 0;
        int x = -1, y = -1, z = -1;
    };
    std::vector<std::vector<Why>> why;

    // proof search layers
    std::vector<Row> base;
    std::vector<std::vector<Row>> layers;
    bool fixpoint = false;

    int find(const Expression& e) const {
        auto it = index.find(e);
        return it == index.end() ? -1 : it->second;
    }
    int add(const Expression& e) {
        auto [it, fresh] = index.emplace(e, static_cast<int>(elems.size()));
        if (fresh) elems.push_back(e);
        return it->second;
    }
    int size() const { return static_cast<int>(elems.size()); }
    std::size_t words() const { return (elems.size() + 63) / 64; }
};

FrameProver::FrameProver(Presentation pres, BaseReading reading) : pres_(std::move(pres)), reading_(reading) {
    for (auto& [u, v] : pres_.rels) {
        u = normalize(u);
        v = normalize(v);
    }
}
FrameProver::~FrameProver() = default;
FrameProver::FrameProver(FrameProver&&) noexcept = default;
FrameProver& FrameProver::operator=(FrameProver&&) noexcept = default;

namespace {

void finish_universe_singles(std::vector<Expression>& elems, std::map<Expression, int>& index,
                             std::vector<std::vector<int>>& singles) {
    singles.assign(elems.size(), {});
    for (std::size_t k = 0; k < elems.size(); ++k)
        for (GenSet p : elems[k].disjuncts) singles[k].push_back(index.at(Expression::conj(p)));
}

}  // namespace

FrameProver::Universe& FrameProver::universe_for(const Expression& a, const Expression& b, unsigned bound) {
    GenSet rel_support = 0;
    for (const auto& [u, v] : pres_.rels) rel_support |= u.support() | v.support();
    GenSet all = rel_support | a.support() | b.support();
    unsigned top_gen = all ? 64 - static_cast<unsigned>(std::countl_zero(all)) : 0;
    unsigned k = std::max(pres_.gens, top_gen);

    if (k <= bound) {
        if (full_ && full_->full) return *full_;
        full_ = std::make_unique<Universe>();
        full_->full = true;
        const unsigned sets = 1u << k;
        std::set<Expression> seen;
        for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << sets); ++fam) {
            Expression e;
            for (unsigned s = 0; s < sets; ++s)
                if (fam >> s & 1) e.disjuncts.push_back(s);
            seen.insert(normalize(e));
        }
        for (const auto& e : seen) full_->add(e);
        finish_universe_singles(full_->elems, full_->index, full_->singles);
        return *full_;
    }

    // Restricted universe: goal, relations, and what the relation steps reach from them.
    full_ = std::make_unique<Universe>();
    Universe& U = *full_;
    std::deque<Expression> work;
    auto push = [&](const Expression& e) {
        Expression n = normalize(e);
        if (U.find(n) >= 0) return;
        if (U.elems.size() >= 4096) throw Error(ErrorKind::TooLarge, "frame universe exceeds 4096 expressions");
        U.add(n);
        work.push_back(n);
    };
    push(a);
    push(b);
    push(Expression::top());
    push(Expression::bot());
    for (const auto& [u, v] : pres_.rels) {
        push(u);
        push(v);
    }
    while (!work.empty()) {
        Expression e = work.front();
        work.pop_front();
        for (GenSet p : e.disjuncts) {
            push(Expression::conj(p));
            for (const auto& [u, v] : pres_.rels) push(meet(Expression::conj(p), v));
        }
    }
    finish_universe_singles(U.elems, U.index, U.singles);
    return U;
}

PrecResult FrameProver::prec(const Expression& a0, const Expression& b0, unsigned bound) {
    const Expression a = normalize(a0), b = normalize(b0);
    Universe& U = universe_for(a, b, bound);
    const int N = U.size();
    if (!U.saturated) {
        U.rel.assign(N, std::vector<char>(N, 0));
        U.why.assign(N, std::vector<Universe::Why>(N));
        std::vector<std::vector<int>> mt(N, std::vector<int>(N, -1)), jt(N, std::vector<int>(N, -1));
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y) {
                mt[x][y] = U.find(meet(U.elems[x], U.elems[y]));
                jt[x][y] = U.find(join(U.elems[x], U.elems[y]));
            }
        std::vector<std::pair<int, int>> work;
        auto add = [&](int x, int y, Universe::Why w) {
            if (x < 0 || y < 0 || U.rel[x][y]) return;
            U.rel[x][y] = 1;
            U.why[x][y] = w;
            work.emplace_back(x, y);
        };
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y)
                if (leq(U.elems[x], U.elems[y])) add(x, y, {'L'});
        for (std::size_t i = 0; i < pres_.rels.size(); ++i)
            add(U.find(pres_.rels[i].first), U.find(pres_.rels[i].second), {'R', static_cast<int>(i)});
        while (!work.empty()) {
            auto [x, y] = work.back();
            work.pop_back();
            for (int c = 0; c < N; ++c) add(mt[x][c], mt[y][c], {'S', x, y, c});
            for (int c = 0; c < N; ++c)
                if (U.rel[y][c]) add(x, c, {'T', x, y, c});
            for (int z = 0; z < N; ++z)
                if (U.rel[z][x]) add(z, y, {'T', z, x, y});
            for (int z = 0; z < N; ++z)
                if (U.rel[z][y]) add(jt[x][z], y, {'J', x, z, y});
        }
        U.saturated = true;
    }

    PrecResult out;
    const int ia = U.find(a), ib = U.find(b);
    if (ia >= 0 && ib >= 0 && U.rel[ia][ib]) {
        out.verdict = PrecResult::Holds;
        std::function<void(int, int, int)> explain = [&](int x, int y, int indent) {
            if (out.chain.size() >= 64) return;
            const auto& w = U.why[x][y];
            std::string line(indent * 2, ' ');
            line += pres_.show(U.elems[x]) + " < " + pres_.show(U.elems[y]) + "  ";
            switch (w.kind) {
                case 'L': line += "[order]"; break;
                case 'R': line += "[relation " + std::to_string(w.x) + "]"; break;
                case 'T': line += "[transitivity via " + pres_.show(U.elems[w.y]) + "]"; break;
                case 'S': line += "[meet with " + pres_.show(U.elems[w.z]) + "]"; break;
                case 'J': line += "[join]"; break;
            }
            out.chain.push_back(line);
            if (w.kind == 'T') {
                explain(w.x, w.y, indent + 1);
                explain(w.y, w.z, indent + 1);
            } else if (w.kind == 'S') {
                explain(w.x, w.y, indent + 1);
            } else if (w.kind == 'J') {
                explain(w.x, w.z, indent + 1);
                explain(w.y, w.z, indent + 1);
            }
        };
        explain(ia, ib, 0);
        return out;
    }
    if (auto w = countermodel(pres_, a, b)) {
        out.verdict = PrecResult::Refuted;
        out.witness = std::move(w);
        return out;
    }
    return out;
}

DeriveResult FrameProver::derives(const Expression& a0, const Expression& b0, unsigned depth) {
    const Expression a = normalize(a0), b = normalize(b0);
    Universe& U = universe_for(a, b, 4);
    const int N = U.size();
    const std::size_t W = U.words();

    auto base_rel = [&](int x, int y) -> int {
        if (reading_ == BaseReading::Lattice && leq(U.elems[x], U.elems[y])) return -1;
        int r = relation_instance(pres_, U.elems[x], U.elems[y]);
        return r >= 0 ? r : -2;
    };

    if (U.layers.empty()) {
        U.base.assign(N, Row(W, 0));
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y)
                if (base_rel(x, y) != -2) set(U.base[x], y);
        U.layers.push_back(U.base);
    }
    while (U.layers.size() < depth && !U.fixpoint) {
        const auto& L = U.layers.back();
        std::vector<Row> next = L;
        for (int x = 0; x < N; ++x) {
            for (int c = 0; c < N; ++c)
                if (test(L[x], c))
                    for (std::size_t w = 0; w < W; ++w) next[x][w] |= L[c][w];
            if (U.singles[x].size() != 1) {
                Row acc(W, ~std::uint64_t{0});
                for (int s : U.singles[x])
                    for (std::size_t w = 0; w < W; ++w) acc[w] &= L[s][w];
                for (std::size_t w = 0; w < W; ++w) next[x][w] |= acc[w];
            }
        }
        for (int y = 0; y < N; ++y) {
            if (U.singles[y].size() < 2) continue;
            for (int x = 0; x < N; ++x)
                for (int q : U.singles[y])
                    if (test(L[x], q)) {
                        set(next[x], y);
                        break;
                    }
        }
        // bits past N in an all-ones accumulator are harmless but keep rows comparable
        if (N % 64)
            for (auto& r : next) r[W - 1] &= (std::uint64_t{1} << (N % 64)) - 1;
        if (next == L) U.fixpoint = true;
        else U.layers.push_back(std::move(next));
    }

    DeriveResult out;
    const int ia = U.find(a), ib = U.find(b);
    const std::size_t avail = std::min<std::size_t>(depth, U.layers.size());
    auto first_layer = [&](int x, int y) -> std::size_t {
        for (std::size_t d = 0; d < avail; ++d)
            if (test(U.layers[d][x], y)) return d + 1;
        return 0;
    };
    if (ia >= 0 && ib >= 0 && depth > 0 && first_layer(ia, ib)) {
        std::function<ProofTree(int, int)> build = [&](int x, int y) -> ProofTree {
            ProofTree t;
            t.a = U.elems[x];
            t.b = U.elems[y];
            int br = base_rel(x, y);
            if (br != -2) {
                t.rule = Rule::Base;
                t.relation = br;
                return t;
            }
            const std::size_t d = first_layer(x, y);
            const auto& L = U.layers[d - 2];
            for (int c = 0; c < N; ++c)
                if (test(L[x], c) && test(L[c], y)) {
                    t.rule = Rule::Cut;
                    t.children.push_back(build(x, c));
                    t.children.push_back(build(c, y));
                    return t;
                }
            if (U.singles[x].size() != 1) {
                bool all = true;
                for (int s : U.singles[x]) all = all && test(L[s], y);
                if (all) {
                    t.rule = Rule::LJoin;
                    for (int s : U.singles[x]) t.children.push_back(build(s, y));
                    return t;
                }
            }
            for (int q : U.singles[y])
                if (U.singles[y].size() >= 2 && test(L[x], q)) {
                    t.rule = Rule::RJoin;
                    t.children.push_back(build(x, q));
                    return t;
                }
            throw Error(ErrorKind::BadArgument, "proof reconstruction failed");
        };
        out.verdict = DeriveResult::Proved;
        out.proof = build(ia, ib);
        return out;
    }
    if (auto w = countermodel(pres_, a, b)) {
        out.verdict = DeriveResult::Refuted;
        out.witness = std::move(w);
    }
    return out;
}

PrecResult prec(const Expression& a, const Expression& b, const Presentation& pres, unsigned bound) {
    FrameProver fp(pres);
    return fp.prec(a, b, bound);
}

DeriveResult derives(const Expression& a, const Expression& b, const Presentation& pres, unsigned depth,
                     BaseReading reading) {
    FrameProver fp(pres, reading);
    return fp.derives(a, b, depth);
}

void check_proof(const Presentation& pres, const ProofTree& t, BaseReading reading) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::BadArgument,
                    "invalid " + std::string(to_string(t.rule)) + " node " + pres.show(t.a) + " |- " +
                        pres.show(t.b) + ": " + why);
    };
    const Expression a = normalize(t.a), b = normalize(t.b);
    switch (t.rule) {
        case Rule::Base: {
            if (!t.children.empty()) fail("base node with premises");
            if (t.relation < 0) {
                if (reading != BaseReading::Lattice) fail("lattice leaf under the literal reading");
                if (!leq(a, b)) fail("not a lattice inequality");
            } else {
                if (static_cast<std::size_t>(t.relation) >= pres.rels.size()) fail("no such relation");
                auto u = normalize(pres.rels[t.relation].first), v = normalize(pres.rels[t.relation].second);
                if (!(leq(a, u) && leq(b, v) && leq(meet(a, v), b))) fail("not a relation instance");
            }
            break;
        }
        case Rule::Cut:
            if (t.children.size() != 2) fail("cut needs two premises");
            if (!(normalize(t.children[0].a) == a && normalize(t.children[1].b) == b &&
                  normalize(t.children[0].b) == normalize(t.children[1].a)))
                fail("premises do not chain");
            break;
        case Rule::LJoin:
            if (t.children.size() != a.disjuncts.size()) fail("one premise per disjunct");
            for (std::size_t k = 0; k < t.children.size(); ++k)
                if (!(normalize(t.children[k].a) == Expression::conj(a.disjuncts[k]) &&
                      normalize(t.children[k].b) == b))
                    fail("premise " + std::to_string(k) + " mismatched");
            break;
        case Rule::RJoin: {
            if (t.children.size() != 1) fail("one premise");
            const auto& c = t.children[0];
            if (!(normalize(c.a) == a)) fail("left side changed");
            Expression q = normalize(c.b);
            if (q.disjuncts.size() != 1 ||
                std::find(b.disjuncts.begin(), b.disjuncts.end(), q.disjuncts[0]) == b.disjuncts.end())
                fail("right side is not a disjunct");
            break;
        }
    }
    for (const auto& c : t.children) check_proof(pres, c, reading);
}

std::string show_proof(const Presentation& pres, const ProofTree& t) {
    std::ostringstream os;
    std::function<void(const ProofTree&, int)> go = [&](const ProofTree& n, int indent) {
        os << std::string(indent * 2, ' ') << pres.show(n.a) << " |- " << pres.show(n.b) << "  [" << to_string(n.rule);
        if (n.rule == Rule::Base) os << (n.relation < 0 ? " order" : " relation " + std::to_string(n.relation));
        os << "]\n";
        for (const auto& c : n.children) go(c, indent + 1);
    };
    go(t, 0);
    return os.str();
}

SpatialReport spatial_check(const Presentation& pres, const Expression& a, const Expression& b, unsigned depth) {
    SpatialReport rep;
    rep.semantic = true;
    for (GenSet x : enumerate_points(pres))
        if (holds_in(x, a) && !holds_in(x, b)) {
            rep.semantic = false;
            break;
        }
    FrameProver fp(pres);
    rep.prec = fp.prec(a, b).verdict;
    rep.derives = fp.derives(a, b, depth).verdict;
    if (rep.prec != PrecResult::Unknown && (rep.prec == PrecResult::Holds) != rep.semantic)
        rep.disagreements.push_back("prec disagrees with points");
    if (rep.derives != DeriveResult::Unknown && (rep.derives == DeriveResult::Proved) != rep.semantic)
        rep.disagreements.push_back("derives disagrees with points");
    return rep;
}

}  // namespace qpk
