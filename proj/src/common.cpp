#include "qpk/common.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <tuple>

namespace qpk {

const char* to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        default: return "unknown";
    }
}

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotAFilter: return "NotAFilter";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::NotLeftCauchy: return "NotLeftCauchy";
        case ErrorKind::SpaceMismatch: return "SpaceMismatch";
        case ErrorKind::InvalidPoint: return "InvalidPoint";
        case ErrorKind::NoLimitOperator: return "NoLimitOperator";
        case ErrorKind::PointOutsideY: return "PointOutsideY";
        case ErrorKind::OracleMissing: return "OracleMissing";
        case ErrorKind::NotHandy: return "NotHandy";
        case ErrorKind::MissingConstituents: return "MissingConstituents";
        case ErrorKind::InexactMetric: return "InexactMetric";
        case ErrorKind::KindMismatch: return "KindMismatch";
        case ErrorKind::DisjointnessUnknown: return "DisjointnessUnknown";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownName: return "UnknownName";
        case ErrorKind::BadArgument: return "BadArgument";
    }
    return "Error";
}

Index pair_index(Index a, Index b) {
    const Index s = a + b;
    if (s < a || s > (Index{1} << 31)) throw Error(ErrorKind::BadArgument, "pairing overflow");
    return s * (s + 1) / 2 + b;
}

std::pair<Index, Index> unpair_index(Index z) {
    // w = floor((sqrt(8z+1)-1)/2), corrected for rounding
    Index w = static_cast<Index>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
    while (w * (w + 1) / 2 > z) --w;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    const Index b = z - w * (w + 1) / 2;
    return {w - b, b};
}

Index triple_index(Index a, Index b, Index c) { return pair_index(a, pair_index(b, c)); }

std::tuple<Index, Index, Index> untriple_index(Index z) {
    auto [a, bc] = unpair_index(z);
    auto [b, c] = unpair_index(bc);
    return {a, b, c};
}

Rational pow2neg(long n) {
    if (n >= 0) return Rational(1, BigInt(1) << n);
    return Rational(BigInt(1) << (-n));
}

std::string rational_str(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::BadArgument, "zero denominator in " + s);
        return Rational(BigInt(s.substr(0, slash)), den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::BadArgument, "not a rational: " + s);
    }
}

std::size_t max_carrier() {
    if (const char* env = std::getenv("QPK_MAX_CARRIER")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 64) return v;
    }
    return 20;
}

}  // namespace qpk
