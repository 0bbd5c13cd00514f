#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qpk {

using Index = std::uint64_t;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Three-valued verdict used by every staged evaluation.
enum class Tri { No, Yes, Unknown };

const char* to_string(Tri t);

inline Tri tri_not(Tri t) {
    if (t == Tri::Yes) return Tri::No;
    if (t == Tri::No) return Tri::Yes;
    return Tri::Unknown;
}
inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
    return Tri::Unknown;
}
inline Tri tri_or(Tri a, Tri b) {
    if (a == Tri::Yes || b == Tri::Yes) return Tri::Yes;
    if (a == Tri::No && b == Tri::No) return Tri::No;
    return Tri::Unknown;
}

enum class ErrorKind {
    NotAFilter,
    TooLarge,
    NotLeftCauchy,
    SpaceMismatch,
    InvalidPoint,
    NoLimitOperator,
    PointOutsideY,
    OracleMissing,
    NotHandy,
    MissingConstituents,
    InexactMetric,
    KindMismatch,
    DisjointnessUnknown,
    ParseError,
    UnknownName,
    BadArgument,
};

const char* to_string(ErrorKind k);

/// Library error. The CLI maps each kind to a distinct exit code >= 10.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }
    int exit_code() const { return 10 + static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

// Cantor pairing on naturals. Throws BadArgument on overflow.
Index pair_index(Index a, Index b);
std::pair<Index, Index> unpair_index(Index z);
Index triple_index(Index a, Index b, Index c);
std::tuple<Index, Index, Index> untriple_index(Index z);

/// 2^{-n} as an exact rational.
Rational pow2neg(long n);
std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

/// Default upper bound for brute-force carrier sizes (env QPK_MAX_CARRIER overrides).
std::size_t max_carrier();

}  // namespace qpk
