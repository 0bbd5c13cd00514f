#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpk/codes.hpp"
#include "qpk/common.hpp"
#include "qpk/pn.hpp"

namespace qpk {

/// Point of a coded quasi-metric space: carrier indices a_n with
/// d̂(a_n, a_m) < 2^{-n} for m > n.
struct QMPoint {
    std::function<Index(std::size_t)> seq;
    Index at(std::size_t n) const { return seq(n); }
    static QMPoint constant(Index a);
    static QMPoint from_vector(std::vector<Index> v);
};

using Sequence = std::function<Index(std::size_t)>;

struct QMSpaceCode {
    std::string name;
    std::function<bool(Index)> valid;
    std::optional<Index> bound;
    /// Exact distance, when available.
    std::function<Rational(Index, Index)> d_exact;
    /// Rational within 2^{-p} of the distance.
    std::function<Rational(Index, Index, int)> d_approx;
    /// Limit of an effective left-Cauchy sequence.
    std::function<QMPoint(const Sequence&)> limit;
    std::function<std::string(Index)> label;
    /// PN-backed carriers: members of the finite set at index a are below this.
    std::function<Index(Index)> support;

    bool exact() const { return static_cast<bool>(d_exact); }
    Rational d(Index a, Index b, int precision) const;
    std::string label_of(Index a) const { return label ? label(a) : std::to_string(a); }
};

/// Finite subsets of N coded by bitmask; d(F,G) = 2^{-min(F\G)}.
QMSpaceCode pn_space();
/// Finite-support binary sequences coded by their bits; d = 2^{-first difference}.
QMSpaceCode cantor_space();
/// Dyadic rationals in [0,1] with d(p,q) = max(p-q, 0); no limit operator.
QMSpaceCode lower_dyadic_space();
Rational lower_dyadic_value(Index a);
std::optional<Index> lower_dyadic_index(const Rational& r);
/// {0,1} with d(1,0) = 1 and every other distance 0.
QMSpaceCode sierpinski_space();
/// Space by registry name; throws UnknownName.
QMSpaceCode qm_fixture(const std::string& name);

struct AxiomViolation {
    enum Kind { Negative, Separation, Triangle } kind;
    Index a, b, c;
};
/// Checks every sampled pair/triple; tolerance 0 for exact spaces, 2^{-precision+1} otherwise.
std::vector<AxiomViolation> axioms_check(const QMSpaceCode& s, const std::vector<Index>& samples, int precision);

Rational hat_d(const QMSpaceCode& s, Index a, Index b, int precision);

/// First modulus violation d̂(a_n,a_m) >= 2^{-n} among n < m < check.
std::optional<std::pair<std::size_t, std::size_t>> point_violation(const QMSpaceCode& s, const QMPoint& x,
                                                                   std::size_t check);
/// d(x,y) within 2^{-precision}; throws InvalidPoint on a modulus violation.
Rational point_dist(const QMSpaceCode& s, const QMPoint& x, const QMPoint& y, int precision);
Tri points_equal_at(const QMSpaceCode& s, const QMPoint& x, const QMPoint& y, int precision);

/// First violation of d(a_n,a_m) < 2^{-n} among 0 < n < m < check.
std::optional<std::pair<std::size_t, std::size_t>> left_cauchy_violation(const QMSpaceCode& s, const Sequence& a,
                                                                          std::size_t check);
QMPoint smyth_limit(const QMSpaceCode& s, const Sequence& a, std::size_t check = 16);

PointView view_qm_carrier(const QMSpaceCode& s, Index a);
PointView view_qm_point(const QMSpaceCode& s, const QMPoint& x);

/// B_d(a, r) for a carrier centre: the single basic (0, a, r).
OpenCode ball_code(const QMSpaceCode& s, Index a, const Rational& r);
/// B_d(x, r) for a point centre: basics B_d(b, l) with d(x_n, b) + l + 2^{-n} < r,
/// for n < stage, carrier b below `carrier_cutoff` and l = 2^{-j}, j <= resolution.
OpenCode ball_code(const QMSpaceCode& s, const QMPoint& x, const Rational& r, std::size_t stage,
                   Index carrier_cutoff, int resolution);

/// {y : d(x,y) < r and d(y,x) < r} as a rank-2 code: the union over dyadic
/// q < r (multiples of 2^{-resolution}) of B_d(x,r) minus {y : d(y,x) > q}, the
/// latter covered by balls B_d(a,ε) with d(a,x) >= q+ε, a below carrier_cutoff.
/// `exact_below` is passed on as the completeness bound of those covers.
BorelCode hat_ball_sigma2(const QMSpaceCode& s, Index x, const Rational& r, Index carrier_cutoff, int resolution,
                          Index exact_below = 0);

/// 1/d(y, F_i) for F_i the complement of the open part of constituent i
/// (0 when F_i is empty); nullopt when it cannot be determined.
using InverseDistanceOracle = std::function<std::optional<Rational>(std::size_t i, const ExplicitSubset& y)>;

/// 1/d(y, F) for F the complement of a P(N) open code: 2^m with m the least
/// max(s) over listed basics s ⊆ y. nullopt when y is not certified inside.
std::optional<Rational> pn_inverse_distance(const OpenCode& u, const ExplicitSubset& y);

/// d'(x,y) = d(x,y) + Σ_{i<=precision} d_i(x,y) over P(N), Y = ⋂ (B_i ∪ A_i).
/// Within 2^{-precision} of the full sum.
Rational dprime(const Pi02Code& Y, const InverseDistanceOracle& oracle, const ExplicitSubset& x,
                const ExplicitSubset& y, int precision);

}  // namespace qpk
