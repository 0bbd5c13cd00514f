#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qpk/common.hpp"

namespace qpk {

/// Finite subset of the naturals, kept sorted and duplicate-free.
class FinSet {
public:
    FinSet() = default;
    FinSet(std::initializer_list<Index> xs);
    static FinSet from(std::vector<Index> xs);
    /// Bits of `mask` read as members.
    static FinSet from_mask(std::uint64_t mask);

    const std::vector<Index>& elems() const { return elems_; }
    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }
    bool contains(Index k) const;
    bool subset_of(const FinSet& other) const;
    FinSet unite(const FinSet& other) const;
    /// Members <= n.
    FinSet upto(Index n) const;
    std::optional<Index> max() const;
    /// Bitmask of members; throws TooLarge if some member >= 64.
    std::uint64_t mask() const;
    std::string str() const;

    bool operator==(const FinSet& o) const { return elems_ == o.elems_; }
    bool operator<(const FinSet& o) const { return elems_ < o.elems_; }

private:
    std::vector<Index> elems_;
};

/// Order of the finite-set poset: t >= s iff t is a subset of s.
bool pfin_order(const FinSet& s, const FinSet& t);

/// Subset of N given by a finite prefix followed by a repeating cycle.
/// A finite set has an all-false cycle; evens is prefix {} and cycle {1,0}.
struct ExplicitSubset {
    std::vector<bool> prefix;
    std::vector<bool> cycle{false};

    static ExplicitSubset finite(const FinSet& s);
    static ExplicitSubset evens();
    static ExplicitSubset odds();
    static ExplicitSubset all();
    /// {a, ..., b-1}
    static ExplicitSubset range(Index a, Index b);

    bool contains(Index k) const;
    bool is_finite() const;
    /// Beyond this index membership is periodic.
    std::size_t horizon() const { return prefix.size(); }
    FinSet upto(Index n) const;
    std::string str() const;
};

/// d(F,G) = 2^{-j} with j least in F but not in G, and 0 when F is a subset of G.
/// Returns j, or nullopt for distance 0.
std::optional<Index> d_exponent(const ExplicitSubset& f, const ExplicitSubset& g);
Rational d_exact(const ExplicitSubset& f, const ExplicitSubset& g);
/// Same for finite sets, on bitmasks (members < 64).
inline int d_exponent_mask(std::uint64_t f, std::uint64_t g) {
    const std::uint64_t diff = f & ~g;
    return diff == 0 ? -1 : __builtin_ctzll(diff);
}

/// A point of P(N) as an increasing sequence of finite sets, q_i a subset of {0..i}.
class PNPoint {
public:
    using StageFn = std::function<FinSet(std::size_t)>;
    /// `exact` promises q_i equals the denoted set intersected with {0..i}.
    PNPoint(StageFn fn, bool exact);

    FinSet at(std::size_t i) const;
    bool exact() const { return exact_; }
    bool same_as(const PNPoint& o) const { return impl_ == o.impl_; }

private:
    std::shared_ptr<const StageFn> impl_;
    bool exact_;
};

PNPoint point_from_explicit(const ExplicitSubset& s);
FinSet union_at(const PNPoint& x, std::size_t stage);

enum class Certified { Yes, Unknown };

/// Certifies d(x,y) <= 2^{-n} from stage information. A positive-information
/// point cannot rule out unseen small members, so certification needs x to be
/// exact (or x and y to be the same point).
Certified d_upper_at(const PNPoint& x, const PNPoint& y, std::size_t n, std::size_t stage);

/// Limit of an effective left-Cauchy sequence: q_i = a_{i+1} ∩ {0..i}.
/// `check` bounds how many terms are validated.
PNPoint pn_limit(std::function<FinSet(std::size_t)> a, std::size_t check);
PNPoint pn_limit(const std::vector<FinSet>& a);

/// First violation of d(a_n,a_m) < 2^{-n} (0 < n < m < check), if any.
std::optional<std::pair<std::size_t, std::size_t>> left_cauchy_violation(
    const std::function<FinSet(std::size_t)>& a, std::size_t check);

}  // namespace qpk
