#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qpk/qmetric.hpp"

using namespace qpk;

TEST_SUITE("qmetric") {

TEST_CASE("axioms on the fixtures") {
    std::vector<Index> all64;
    for (Index a = 0; a < 64; ++a) all64.push_back(a);
    CHECK(axioms_check(pn_space(), all64, 20).empty());
    CHECK(axioms_check(cantor_space(), all64, 20).empty());
    CHECK(axioms_check(sierpinski_space(), {0, 1}, 20).empty());
    std::vector<Index> dy;
    for (Index a = 0; a < 40; ++a)
        if (lower_dyadic_space().valid(a)) dy.push_back(a);
    CHECK(axioms_check(lower_dyadic_space(), dy, 20).empty());
}

TEST_CASE("a broken distance is reported") {
    QMSpaceCode s = pn_space();
    s.d_exact = [](Index a, Index b) { return a == b ? Rational(0) : Rational(a == 1 && b == 3 ? 4 : 1); };
    s.d_approx = [s](Index a, Index b, int) { return s.d_exact(a, b); };
    const auto v = axioms_check(s, {1, 2, 3}, 10);
    CHECK_FALSE(v.empty());
}

TEST_CASE("hat_d") {
    const auto c = cantor_space();
    for (Index a = 0; a < 16; ++a)
        for (Index b = 0; b < 16; ++b) CHECK(hat_d(c, a, b, 20) == c.d_exact(a, b));
    const auto L = lower_dyadic_space();
    const Index half = *lower_dyadic_index(Rational(1, 2)), quarter = *lower_dyadic_index(Rational(1, 4));
    CHECK(hat_d(L, half, quarter, 20) == Rational(1, 4));
    const auto p = pn_space();
    for (Index a = 0; a < 32; ++a)
        for (Index b = 0; b < 32; ++b) CHECK(hat_d(p, a, b, 20) >= p.d_exact(a, b));
}

TEST_CASE("point_dist and points_equal_at") {
    const auto c = cantor_space();
    const auto x = QMPoint::constant(5);
    CHECK(point_dist(c, x, x, 10) <= pow2neg(9));
    for (Index a = 0; a < 8; ++a)
        for (Index b = 0; b < 8; ++b) {
            const Rational d = point_dist(c, QMPoint::constant(a), QMPoint::constant(b), 12);
            CHECK(abs(d - c.d_exact(a, b)) <= pow2neg(12));
        }
    CHECK(points_equal_at(c, x, x, 8) == Tri::Yes);
    CHECK(points_equal_at(c, QMPoint::constant(0), QMPoint::constant(1), 8) == Tri::No);
    // two representatives of 0b1011: truncations and the exact value
    const QMPoint y{[](std::size_t n) { return n >= 8 ? Index(0b1011) : Index(0b1011) & ((Index{1} << (n + 1)) - 1); }};
    CHECK(points_equal_at(c, QMPoint::constant(0b1011), y, 8) == Tri::Yes);
}

TEST_CASE("smyth_limit") {
    const auto p = pn_space();
    const Sequence a = [](std::size_t n) { return n + 3 < 60 ? Index(0b101) | (Index{1} << (n + 3)) : Index(0b101); };
    const auto L = smyth_limit(p, a);
    CHECK(points_equal_at(p, L, QMPoint::constant(0b101), 8) == Tri::Yes);
    CHECK(points_equal_at(cantor_space(), smyth_limit(cantor_space(), [](std::size_t) { return Index(6); }),
                          QMPoint::constant(6), 8) == Tri::Yes);
    CHECK_THROWS_AS(smyth_limit(lower_dyadic_space(), [](std::size_t) { return Index(0); }), Error);
}

TEST_CASE("ball codes") {
    const auto p = pn_space();
    const auto b = ball_code(p, 5, Rational(1, 4));
    REQUIRE(b.basics.size() == 1);
    CHECK(b.basics[0] == BasicOpen::ball(5, Rational(1, 4)));
    for (Index y = 0; y < 64; ++y) {
        const Tri in = member_open(view_qm_carrier(p, y), b, 10);
        CHECK((in == Tri::Yes) == (oracle::d_pn(5, y) < Rational(1, 4)));
    }
    const auto whole = ball_code(p, 5, Rational(4));
    for (Index y = 0; y < 64; ++y) CHECK(member_open(view_qm_carrier(p, y), whole, 10) == Tri::Yes);
}

TEST_CASE("hat_ball_sigma2 on the symmetric fixture") {
    const auto c = cantor_space();
    const auto code = hat_ball_sigma2(c, 5, Rational(1, 4), 32, 6, 32);
    for (Index y = 0; y < 32; ++y) {
        const Tri in = member_at(view_qm_carrier(c, y), code, 20);
        if (in != Tri::Unknown) CHECK((in == Tri::Yes) == (c.d_exact(5, y) < Rational(1, 4)));
    }
}

TEST_CASE("dprime") {
    Pi02Code Y;
    Y.pairs.push_back({OpenCode::whole_pn(), OpenCode::whole_pn(), 0});
    const InverseDistanceOracle oracle = [&Y](std::size_t i, const ExplicitSubset& y) {
        return pn_inverse_distance(Y.pairs[i].B, y);
    };
    const auto a = ExplicitSubset::finite({1, 4}), b = ExplicitSubset::finite({1});
    CHECK(dprime(Y, oracle, a, a, 20) == 0);
    // open parts cover everything, so every term vanishes
    CHECK(dprime(Y, oracle, a, b, 20) == d_exact(a, b));
    CHECK_THROWS_AS(dprime(Y, InverseDistanceOracle{}, a, b, 20), Error);

    Pi02Code Z;
    Z.complete = false;
    CHECK_THROWS_AS(dprime(Z, oracle, a, b, 20), Error);

    // 0 ∈ x → 1 ∈ x; {0,1} is on the open side, {} on the closed side
    Pi02Code W;
    W.pairs.push_back({OpenCode::of({BasicOpen::pn({1})}), OpenCode::of({BasicOpen::pn({0})}), 0});
    const InverseDistanceOracle ow = [&W](std::size_t i, const ExplicitSubset& y) {
        return pn_inverse_distance(W.pairs[i].B, y);
    };
    const auto in = ExplicitSubset::finite({0, 1}), out = ExplicitSubset::finite({});
    CHECK(dprime(W, ow, in, out, 20) == d_exact(in, out) + 1);
    CHECK_THROWS_AS(dprime(W, ow, ExplicitSubset::finite({0}), out, 20), Error);
}

}
