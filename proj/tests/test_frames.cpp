#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qpk/frames.hpp"

using namespace qpk;

namespace {

Expression random_expr(std::mt19937_64& rng, unsigned gens) {
    Expression e;
    const int k = static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) e.disjuncts.push_back(rng() & ((GenSet{1} << gens) - 1) & rng());
    return e;
}

oracle::Expr as_oracle(const Expression& e) { return oracle::Expr(e.disjuncts.begin(), e.disjuncts.end()); }

}  // namespace

TEST_SUITE("frames") {

TEST_CASE("lattice order") {
    const auto g = [](unsigned i) { return Expression::gen(i); };
    std::mt19937_64 rng(41);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_expr(rng, 4);
        CHECK(leq(a, Expression::top()));
        CHECK(leq(Expression::bot(), a));
    }
    CHECK(leq(join(meet(g(0), g(1)), g(2)), join(g(0), g(2))));
    for (int t = 0; t < 300; ++t) {
        const auto a = random_expr(rng, 4), b = random_expr(rng, 4);
        CHECK(leq(a, b) == oracle::entails(4, {}, as_oracle(a), as_oracle(b)));
    }
}

TEST_CASE("meet, join, normalize") {
    const auto g = [](unsigned i) { return Expression::gen(i); };
    std::mt19937_64 rng(42);
    for (int t = 0; t < 1000; ++t) {
        const auto a = random_expr(rng, 5);
        CHECK(normalize(meet(a, Expression::top())) == normalize(a));
        CHECK(normalize(join(a, Expression::bot())) == normalize(a));
        CHECK(normalize(normalize(a)) == normalize(a));
    }
    CHECK(normalize(meet(join(g(0), g(1)), g(2))) == normalize(join(meet(g(0), g(2)), meet(g(1), g(2)))));
}

TEST_CASE("prec and derives on the Sierpinski presentation") {
    Presentation S{"S", 1, {"g"}, {{Expression::top(), Expression::gen(0)}}};
    const auto p = prec(Expression::top(), Expression::gen(0), S);
    CHECK(p.verdict == PrecResult::Holds);
    Presentation T{"T", 1, {"g"}, {}};
    const auto r = prec(Expression::gen(0), Expression::bot(), T);
    CHECK(r.verdict == PrecResult::Refuted);
    REQUIRE(r.witness);
    CHECK(r.witness->final_set() == 1);

    const auto d = derives(Expression::top(), Expression::gen(0), S, 8);
    CHECK(d.verdict == DeriveResult::Proved);
    REQUIRE(d.proof);
    CHECK_NOTHROW(check_proof(S, *d.proof));
    const auto dr = derives(Expression::gen(0), Expression::bot(), T, 8);
    CHECK(dr.verdict == DeriveResult::Refuted);
    const auto aa = derives(Expression::gen(0), Expression::gen(0), T, 1);
    CHECK(aa.verdict == DeriveResult::Proved);
    CHECK(aa.proof->height() == 1);
}

TEST_CASE("lattice steps are one-step chains") {
    Presentation P{"P", 2, {}, {}};
    const auto p = prec(Expression::conj(3), Expression::gen(0), P);
    CHECK(p.verdict == PrecResult::Holds);
    CHECK(p.chain.size() <= 2);
}

TEST_CASE("points") {
    CHECK(enumerate_points(Presentation{"", 2, {}, {}}).size() == 4);
    const Presentation nog{"", 1, {}, {{Expression::gen(0), Expression::bot()}}};
    CHECK(enumerate_points(nog) == std::vector<GenSet>{0});
    const Presentation S{"S", 1, {}, {{Expression::top(), Expression::gen(0)}}};
    CHECK(enumerate_points(Presentation{"", 1, {}, {}}).size() == 2);
    CHECK(enumerate_points(S) == std::vector<GenSet>{1});
    CHECK_THROWS_AS(enumerate_points(Presentation{"", 17, {}, {}}), Error);
}

TEST_CASE("point_sat") {
    const FramePoint x{{0, 1, 3}, true};
    CHECK(point_sat(x, Expression::top(), 0) == Sat::Sat);
    CHECK(point_sat(x, Expression::bot(), 0) == Sat::Unsat);
    std::mt19937_64 rng(43);
    for (int t = 0; t < 200; ++t) {
        const auto e = random_expr(rng, 3);
        CHECK((point_sat(x, e, 5) == Sat::Sat) == holds_in(3, e));
    }
}

TEST_CASE("prec agrees with a closure oracle on random presentations") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 60; ++t) {
        Presentation pres{"", 3, {}, {}};
        for (int r = 0; r < 2; ++r) pres.rels.emplace_back(random_expr(rng, 3), random_expr(rng, 3));
        std::vector<std::pair<oracle::Expr, oracle::Expr>> rels;
        for (const auto& [u, v] : pres.rels) rels.emplace_back(as_oracle(u), as_oracle(v));
        FrameProver fp(pres);
        for (int g = 0; g < 20; ++g) {
            const auto a = random_expr(rng, 3), b = random_expr(rng, 3);
            const bool sem = oracle::entails(3, rels, as_oracle(a), as_oracle(b));
            const auto p = fp.prec(a, b);
            CHECK(p.verdict == (sem ? PrecResult::Holds : PrecResult::Refuted));
            const auto d = fp.derives(a, b, 10);
            if (d.verdict == DeriveResult::Proved) CHECK_NOTHROW(check_proof(pres, *d.proof));
            if (d.verdict != DeriveResult::Unknown) CHECK((d.verdict == DeriveResult::Proved) == sem);
        }
    }
}

TEST_CASE("literal base reading still proves relation instances") {
    Presentation S{"S", 1, {"g"}, {{Expression::top(), Expression::gen(0)}}};
    const auto d = derives(Expression::top(), Expression::gen(0), S, 8, BaseReading::Literal);
    CHECK(d.verdict == DeriveResult::Proved);
    CHECK_NOTHROW(check_proof(S, *d.proof, BaseReading::Literal));
}

TEST_CASE("check_proof rejects a bad tree") {
    Presentation T{"T", 1, {"g"}, {}};
    ProofTree t;
    t.a = Expression::top();
    t.b = Expression::gen(0);
    t.rule = Rule::Base;
    CHECK_THROWS_AS(check_proof(T, t), Error);
}

TEST_CASE("spatial_check") {
    Presentation S{"S", 1, {"g"}, {{Expression::top(), Expression::gen(0)}}};
    const auto r = spatial_check(S, Expression::top(), Expression::gen(0));
    CHECK(r.semantic);
    CHECK(r.disagreements.empty());
    const auto same = spatial_check(S, Expression::gen(0), Expression::gen(0));
    CHECK(same.semantic);
    CHECK(same.disagreements.empty());
}

}
