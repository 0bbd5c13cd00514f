#include "qpk/qmetric.hpp"

#include <algorithm>
#include <set>

namespace qpk {

QMPoint QMPoint::constant(Index a) {
    return QMPoint{[a](std::size_t) { return a; }};
}

QMPoint QMPoint::from_vector(std::vector<Index> v) {
    if (v.empty()) throw Error(ErrorKind::BadArgument, "empty point sequence");
    return QMPoint{[v = std::move(v)](std::size_t n) { return v[std::min(n, v.size() - 1)]; }};
}

Rational QMSpaceCode::d(Index a, Index b, int precision) const {
    if (d_exact) return d_exact(a, b);
    if (d_approx) return d_approx(a, b, precision);
    throw Error(ErrorKind::BadArgument, "space " + name + " has no distance");
}

namespace {

Index bit_length(Index a) { return a == 0 ? 0 : 64 - __builtin_clzll(a); }

std::string mask_label(Index a) { return FinSet::from_mask(a).str(); }

}  // namespace

QMSpaceCode pn_space() {
    QMSpaceCode s;
    s.name = "pn";
    s.valid = [](Index) { return true; };
    s.d_exact = [](Index a, Index b) {
        const int j = d_exponent_mask(a, b);
        return j < 0 ? Rational(0) : pow2neg(j);
    };
    s.label = mask_label;
    s.support = bit_length;
    // Limit via q_i = a_{i+1} ∩ {0..i}; the point's n-th term is the union of
    // the q_i seen within a horizon of 64 further terms, cut to {0..n+1}.
    s.limit = [](const Sequence& a) {
        return QMPoint{[a](std::size_t n) {
            Index x = 0;
            for (std::size_t i = 0; i < n + 64; ++i) {
                const Index low = i >= 63 ? ~Index{0} : ((Index{1} << (i + 1)) - 1);
                x |= a(i + 1) & low;
            }
            const Index keep = n + 2 >= 64 ? ~Index{0} : ((Index{1} << (n + 2)) - 1);
            return x & keep;
        }};
    };
    return s;
}

QMSpaceCode cantor_space() {
    QMSpaceCode s;
    s.name = "cantor";
    s.valid = [](Index) { return true; };
    s.d_exact = [](Index a, Index b) { return a == b ? Rational(0) : pow2neg(__builtin_ctzll(a ^ b)); };
    s.label = [](Index a) {
        std::string out;
        for (Index i = 0; i < std::max<Index>(bit_length(a), 1); ++i) out += ((a >> i) & 1) ? '1' : '0';
        return out + "0...";
    };
    s.limit = [](const Sequence& a) { return QMPoint{[a](std::size_t n) { return a(n + 1); }}; };
    return s;
}

Rational lower_dyadic_value(Index a) {
    if (a == 0) return 0;
    if (a == 1) return 1;
    const Index m = a - 1;
    const int j = static_cast<int>(bit_length(m));
    const Index t = m - (Index{1} << (j - 1));
    return Rational(BigInt(2 * t + 1), BigInt(1) << j);
}

std::optional<Index> lower_dyadic_index(const Rational& r) {
    if (r == 0) return 0;
    if (r == 1) return 1;
    if (r < 0 || r > 1) return std::nullopt;
    const BigInt den = boost::multiprecision::denominator(r);
    const BigInt num = boost::multiprecision::numerator(r);
    if ((den & (den - 1)) != 0) return std::nullopt;
    const int j = static_cast<int>(boost::multiprecision::msb(den));
    if (j > 60) return std::nullopt;
    const Index t = static_cast<Index>((num - 1) / 2);
    return (Index{1} << (j - 1)) + t + 1;
}

QMSpaceCode lower_dyadic_space() {
    QMSpaceCode s;
    s.name = "lower-dyadic";
    s.valid = [](Index a) { return a < (Index{1} << 40); };
    s.d_exact = [](Index a, Index b) {
        const Rational v = lower_dyadic_value(a) - lower_dyadic_value(b);
        return v > 0 ? v : Rational(0);
    };
    s.label = [](Index a) { return rational_str(lower_dyadic_value(a)); };
    return s;
}

QMSpaceCode sierpinski_space() {
    QMSpaceCode s;
    s.name = "sierpinski";
    s.valid = [](Index a) { return a < 2; };
    s.bound = 2;
    s.d_exact = [](Index a, Index b) { return (a == 1 && b == 0) ? Rational(1) : Rational(0); };
    return s;
}

QMSpaceCode qm_fixture(const std::string& name) {
    if (name == "pn") return pn_space();
    if (name == "cantor") return cantor_space();
    if (name == "lower-dyadic") return lower_dyadic_space();
    if (name == "sierpinski") return sierpinski_space();
    throw Error(ErrorKind::UnknownName, "unknown quasi-metric fixture: " + name);
}

std::vector<AxiomViolation> axioms_check(const QMSpaceCode& s, const std::vector<Index>& samples, int precision) {
    std::vector<AxiomViolation> out;
    const Rational tol = s.exact() ? Rational(0) : pow2neg(precision - 1);
    const std::size_t n = samples.size();
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = s.d(samples[i], samples[j], precision);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i][j] < -tol) out.push_back({AxiomViolation::Negative, samples[i], samples[j], samples[j]});
            if (i < j && samples[i] != samples[j] && d[i][j] <= tol && d[j][i] <= tol && s.exact())
                out.push_back({AxiomViolation::Separation, samples[i], samples[j], samples[j]});
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (d[i][j] + d[j][k] + tol < d[i][k])
                    out.push_back({AxiomViolation::Triangle, samples[i], samples[j], samples[k]});
    return out;
}

Rational hat_d(const QMSpaceCode& s, Index a, Index b, int precision) {
    return std::max(s.d(a, b, precision), s.d(b, a, precision));
}

std::optional<std::pair<std::size_t, std::size_t>> point_violation(const QMSpaceCode& s, const QMPoint& x,
                                                                   std::size_t check) {
    if (!s.exact()) return std::nullopt;
    for (std::size_t n = 0; n < check; ++n)
        for (std::size_t m = n + 1; m < check; ++m)
            if (hat_d(s, x.at(n), x.at(m), 0) >= pow2neg(static_cast<long>(n))) return std::make_pair(n, m);
    return std::nullopt;
}

Rational point_dist(const QMSpaceCode& s, const QMPoint& x, const QMPoint& y, int precision) {
    const std::size_t n = static_cast<std::size_t>(std::max(precision, 0)) + 2;
    for (const QMPoint* p : {&x, &y})
        if (auto bad = point_violation(s, *p, n + 1))
            throw Error(ErrorKind::InvalidPoint, "modulus violated at n=" + std::to_string(bad->first) +
                                                     ", m=" + std::to_string(bad->second));
    // |d(x,y) - d(x_n,y_n)| <= 2·2^{-n}, plus 2^{-n} from the approximation
    return s.d(x.at(n), y.at(n), static_cast<int>(n));
}

Tri points_equal_at(const QMSpaceCode& s, const QMPoint& x, const QMPoint& y, int precision) {
    const Rational err = pow2neg(precision + 2);
    const Rational dxy = point_dist(s, x, y, precision + 2);
    const Rational dyx = point_dist(s, y, x, precision + 2);
    const Rational lo = pow2neg(precision), hi = pow2neg(precision - 1);
    if (dxy + err < lo && dyx + err < lo) return Tri::Yes;
    if (dxy - err > hi || dyx - err > hi) return Tri::No;
    return Tri::Unknown;
}

std::optional<std::pair<std::size_t, std::size_t>> left_cauchy_violation(const QMSpaceCode& s, const Sequence& a,
                                                                          std::size_t check) {
    if (!s.exact()) throw Error(ErrorKind::InexactMetric, "left-Cauchy check needs exact distances");
    for (std::size_t n = 1; n < check; ++n)
        for (std::size_t m = n + 1; m < check; ++m)
            if (s.d(a(n), a(m), 0) >= pow2neg(static_cast<long>(n))) return std::make_pair(n, m);
    return std::nullopt;
}

QMPoint smyth_limit(const QMSpaceCode& s, const Sequence& a, std::size_t check) {
    if (!s.limit) throw Error(ErrorKind::NoLimitOperator, "space " + s.name + " has no limit operator");
    if (auto bad = left_cauchy_violation(s, a, check))
        throw Error(ErrorKind::NotLeftCauchy, "not left-Cauchy at n=" + std::to_string(bad->first) +
                                                  ", m=" + std::to_string(bad->second));
    return s.limit(a);
}

namespace {

// verdict for "estimate ± err < r"
Tri below_radius(const Rational& est, const Rational& err, const Rational& r) {
    if (est + err < r) return Tri::Yes;
    if (est - err >= r) return Tri::No;
    return Tri::Unknown;
}

}  // namespace

PointView view_qm_carrier(const QMSpaceCode& s, Index a) {
    PointView v;
    v.kind = SpaceKind::QM;
    v.in_basic = [s, a](const BasicOpen& b, std::size_t stage) {
        if (b.kind != SpaceKind::QM) throw Error(ErrorKind::SpaceMismatch, "qm point, foreign basic open");
        if (s.exact()) return s.d_exact(b.elem, a) < b.radius ? Tri::Yes : Tri::No;
        const int p = static_cast<int>(stage);
        return below_radius(s.d(b.elem, a, p), pow2neg(p), b.radius);
    };
    if (s.support) v.support_bound = s.support(a);
    return v;
}

PointView view_qm_point(const QMSpaceCode& s, const QMPoint& x) {
    PointView v;
    v.kind = SpaceKind::QM;
    v.in_basic = [s, x](const BasicOpen& b, std::size_t stage) {
        if (b.kind != SpaceKind::QM) throw Error(ErrorKind::SpaceMismatch, "qm point, foreign basic open");
        const int p = static_cast<int>(stage);
        Rational err = pow2neg(p);
        if (!s.exact()) err += pow2neg(p);
        return below_radius(s.d(b.elem, x.at(stage), p), err, b.radius);
    };
    return v;
}

OpenCode ball_code(const QMSpaceCode& s, Index a, const Rational& r) {
    if (r <= 0) throw Error(ErrorKind::BadArgument, "ball radius must be positive");
    (void)s;
    return OpenCode::of({BasicOpen::ball(a, r)});
}

OpenCode ball_code(const QMSpaceCode& s, const QMPoint& x, const Rational& r, std::size_t stage,
                   Index carrier_cutoff, int resolution) {
    if (r <= 0) throw Error(ErrorKind::BadArgument, "ball radius must be positive");
    OpenCode u = OpenCode::empty(SpaceKind::QM);
    u.complete = false;
    std::set<BasicOpen> seen;
    for (std::size_t n = 0; n < stage; ++n) {
        const Index xn = x.at(n);
        for (Index b = 0; b < carrier_cutoff; ++b) {
            if (!s.valid(b)) continue;
            const Rational dist = s.d(xn, b, resolution + 2);
            const Rational slack = s.exact() ? Rational(0) : pow2neg(resolution + 2);
            for (int j = 0; j <= resolution; ++j) {
                const Rational l = pow2neg(j);
                if (dist + slack + l + pow2neg(static_cast<long>(n)) < r) {
                    BasicOpen ball = BasicOpen::ball(b, l);
                    if (seen.insert(ball).second) u.basics.push_back(ball);
                    break;  // larger l first; smaller balls at b add nothing
                }
            }
        }
    }
    return u;
}

BorelCode hat_ball_sigma2(const QMSpaceCode& s, Index x, const Rational& r, Index carrier_cutoff, int resolution,
                          Index exact_below) {
    if (r <= 0) throw Error(ErrorKind::BadArgument, "ball radius must be positive");
    BorelCode c;
    c.kind = SpaceKind::QM;
    c.rank = 2;
    c.polarity = 1;
    c.open = OpenCode::empty(SpaceKind::QM);
    const Rational step = pow2neg(resolution);
    // q = k·2^{-resolution} < r, largest first so membership shows up early
    std::vector<Rational> qs;
    for (Rational q = 0; q < r; q += step) qs.push_back(q);
    std::reverse(qs.begin(), qs.end());
    std::vector<Rational> dax;
    for (Index a = 0; a < carrier_cutoff; ++a) dax.push_back(s.valid(a) ? s.d(a, x, resolution + 2) : Rational(-1));
    const Rational slack = s.exact() ? Rational(0) : pow2neg(resolution + 2);
    for (const Rational& q : qs) {
        BorelCode v = BorelCode::open_set(OpenCode::of({BasicOpen::ball(x, r)}));
        OpenCode w = OpenCode::empty(SpaceKind::QM);
        w.complete = false;
        w.complete_below = exact_below;
        for (Index a = 0; a < carrier_cutoff; ++a) {
            if (!s.valid(a)) continue;
            for (int j = 0; j <= resolution; ++j) {
                const Rational eps = pow2neg(j);
                if (dax[a] - slack >= q + eps) {
                    w.basics.push_back(BasicOpen::ball(a, eps));
                    break;
                }
            }
        }
        c.pieces.emplace_back(std::move(v), BorelCode::open_set(std::move(w)));
    }
    return c;
}

std::optional<Rational> pn_inverse_distance(const OpenCode& u, const ExplicitSubset& y) {
    std::optional<Index> m;
    for (const auto& b : u.basics) {
        bool inside = true;
        for (Index k : b.set.elems())
            if (!y.contains(k)) {
                inside = false;
                break;
            }
        if (!inside) continue;
        if (b.set.empty()) return Rational(0);
        const Index mx = *b.set.max();
        if (!m || mx < *m) m = mx;
    }
    if (!m) return std::nullopt;
    if (!u.complete && *m >= u.complete_below) return std::nullopt;
    return Rational(BigInt(1) << *m);
}

Rational dprime(const Pi02Code& Y, const InverseDistanceOracle& oracle, const ExplicitSubset& x,
                const ExplicitSubset& y, int precision) {
    if (!oracle) throw Error(ErrorKind::OracleMissing, "no distance oracle");
    const std::size_t terms = static_cast<std::size_t>(std::max(precision, 0)) + 1;
    if (Y.pairs.size() < terms && !Y.complete)
        throw Error(ErrorKind::MissingConstituents, "fewer constituents than the precision needs");
    const PointView vx = view_explicit(x), vy = view_explicit(y);
    // side of constituent i the point lies on: 1 open part, 0 closed part
    auto side = [&](const PointView& v, std::size_t i) {
        const Pi02Pair& p = Y.pairs[i];
        const Tri inU = member_open(v, p.B, 0);
        if (inU == Tri::Yes) return 1;
        const Tri inA = tri_not(member_open(v, p.coA, 0));
        if (inA == Tri::Yes) return 0;
        if (inU == Tri::No && inA == Tri::No)
            throw Error(ErrorKind::PointOutsideY, "point outside constituent " + std::to_string(i));
        throw Error(ErrorKind::PointOutsideY, "membership in constituent " + std::to_string(i) + " undetermined");
    };
    Rational total = d_exact(x, y);
    for (std::size_t i = 0; i < std::min(terms, Y.pairs.size()); ++i) {
        const int sx = side(vx, i), sy = side(vy, i);
        const Rational cap = pow2neg(static_cast<long>(i));
        if (sx == 1 && sy == 0) {
            total += cap;
        } else if (sx == 1 && sy == 1) {
            auto fx = oracle(i, x), fy = oracle(i, y);
            if (!fx || !fy) throw Error(ErrorKind::OracleMissing, "oracle undetermined at " + std::to_string(i));
            const Rational diff = *fy - *fx;
            if (diff > 0) total += std::min(cap, diff);
        }
    }
    return total;
}

}  // namespace qpk
