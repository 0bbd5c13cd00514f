#include "qpk/pn.hpp"

#include <algorithm>
#include <numeric>

namespace qpk {

FinSet::FinSet(std::initializer_list<Index> xs) : elems_(xs) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

FinSet FinSet::from(std::vector<Index> xs) {
    FinSet s;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    s.elems_ = std::move(xs);
    return s;
}

FinSet FinSet::from_mask(std::uint64_t mask) {
    FinSet s;
    for (Index i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1) s.elems_.push_back(i);
    return s;
}

bool FinSet::contains(Index k) const { return std::binary_search(elems_.begin(), elems_.end(), k); }

bool FinSet::subset_of(const FinSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

FinSet FinSet::unite(const FinSet& other) const {
    FinSet s;
    std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                   std::back_inserter(s.elems_));
    return s;
}

FinSet FinSet::upto(Index n) const {
    FinSet s;
    for (Index e : elems_) {
        if (e > n) break;
        s.elems_.push_back(e);
    }
    return s;
}

std::optional<Index> FinSet::max() const {
    if (elems_.empty()) return std::nullopt;
    return elems_.back();
}

std::uint64_t FinSet::mask() const {
    std::uint64_t m = 0;
    for (Index e : elems_) {
        if (e >= 64) throw Error(ErrorKind::TooLarge, "finite set member >= 64");
        m |= std::uint64_t{1} << e;
    }
    return m;
}

std::string FinSet::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(elems_[i]);
    }
    return out + "}";
}

bool pfin_order(const FinSet& s, const FinSet& t) { return t.subset_of(s); }

ExplicitSubset ExplicitSubset::finite(const FinSet& s) {
    ExplicitSubset e;
    if (auto m = s.max()) {
        e.prefix.assign(*m + 1, false);
        for (Index k : s.elems()) e.prefix[k] = true;
    }
    return e;
}

ExplicitSubset ExplicitSubset::evens() { return ExplicitSubset{{}, {true, false}}; }
ExplicitSubset ExplicitSubset::odds() { return ExplicitSubset{{}, {false, true}}; }
ExplicitSubset ExplicitSubset::all() { return ExplicitSubset{{}, {true}}; }

ExplicitSubset ExplicitSubset::range(Index a, Index b) {
    ExplicitSubset e;
    e.prefix.assign(b > a ? b : a, false);
    for (Index k = a; k < b; ++k) e.prefix[k] = true;
    return e;
}

bool ExplicitSubset::contains(Index k) const {
    if (k < prefix.size()) return prefix[k];
    if (cycle.empty()) return false;
    return cycle[(k - prefix.size()) % cycle.size()];
}

bool ExplicitSubset::is_finite() const {
    return std::none_of(cycle.begin(), cycle.end(), [](bool b) { return b; });
}

FinSet ExplicitSubset::upto(Index n) const {
    std::vector<Index> xs;
    for (Index k = 0; k <= n; ++k)
        if (contains(k)) xs.push_back(k);
    return FinSet::from(std::move(xs));
}

std::string ExplicitSubset::str() const {
    std::string out;
    for (bool b : prefix) out += b ? '1' : '0';
    out += "(";
    for (bool b : cycle) out += b ? '1' : '0';
    return out + ")*";
}

std::optional<Index> d_exponent(const ExplicitSubset& f, const ExplicitSubset& g) {
    // past both prefixes the pattern repeats with period lcm of the cycles
    const std::size_t cf = std::max<std::size_t>(f.cycle.size(), 1);
    const std::size_t cg = std::max<std::size_t>(g.cycle.size(), 1);
    const std::size_t scan = std::max(f.horizon(), g.horizon()) + std::lcm(cf, cg);
    for (Index k = 0; k < scan; ++k)
        if (f.contains(k) && !g.contains(k)) return k;
    return std::nullopt;
}

Rational d_exact(const ExplicitSubset& f, const ExplicitSubset& g) {
    auto j = d_exponent(f, g);
    return j ? pow2neg(static_cast<long>(*j)) : Rational(0);
}

PNPoint::PNPoint(StageFn fn, bool exact)
    : impl_(std::make_shared<const StageFn>(std::move(fn))), exact_(exact) {}

FinSet PNPoint::at(std::size_t i) const { return (*impl_)(i).upto(i); }

PNPoint point_from_explicit(const ExplicitSubset& s) {
    return PNPoint([s](std::size_t i) { return s.upto(i); }, true);
}

FinSet union_at(const PNPoint& x, std::size_t stage) { return x.at(stage); }

Certified d_upper_at(const PNPoint& x, const PNPoint& y, std::size_t n, std::size_t stage) {
    if (x.same_as(y)) return Certified::Yes;
    if (!x.exact() || n == 0) return n == 0 ? Certified::Yes : Certified::Unknown;
    if (stage + 1 < n) return Certified::Unknown;
    // x ∩ {0..n-1} is fully known; it must sit inside what y has shown
    const FinSet need = x.at(stage).upto(n - 1);
    return need.subset_of(y.at(stage)) ? Certified::Yes : Certified::Unknown;
}

std::optional<std::pair<std::size_t, std::size_t>> left_cauchy_violation(
    const std::function<FinSet(std::size_t)>& a, std::size_t check) {
    std::vector<FinSet> terms;
    terms.reserve(check);
    for (std::size_t i = 0; i < check; ++i) terms.push_back(a(i));
    for (std::size_t n = 1; n < check; ++n) {
        for (std::size_t m = n + 1; m < check; ++m) {
            // d(a_n,a_m) < 2^{-n} iff nothing of a_n up to n is missing from a_m
            if (!terms[n].upto(n).subset_of(terms[m])) return std::make_pair(n, m);
        }
    }
    return std::nullopt;
}

PNPoint pn_limit(std::function<FinSet(std::size_t)> a, std::size_t check) {
    if (auto bad = left_cauchy_violation(a, check)) {
        throw Error(ErrorKind::NotLeftCauchy, "not left-Cauchy at n=" + std::to_string(bad->first) +
                                                  ", m=" + std::to_string(bad->second));
    }
    return PNPoint([a = std::move(a)](std::size_t i) { return a(i + 1).upto(i); }, false);
}

PNPoint pn_limit(const std::vector<FinSet>& a) {
    if (a.empty()) throw Error(ErrorKind::BadArgument, "empty sequence");
    auto fn = [a](std::size_t i) { return a[std::min(i, a.size() - 1)]; };
    return pn_limit(fn, a.size() + 1);
}

}  // namespace qpk
