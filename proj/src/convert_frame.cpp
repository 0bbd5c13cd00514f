#include <algorithm>

#include "qpk/convert.hpp"

namespace qpk {

OpenCode expression_open(const Expression& e) {
    std::vector<BasicOpen> bs;
    for (GenSet d : normalize(e).disjuncts) bs.push_back(BasicOpen::pn(FinSet::from_mask(d)));
    return OpenCode::of(std::move(bs));
}

Expression open_expression(const OpenCode& u) {
    if (u.kind != SpaceKind::PN) throw Error(ErrorKind::SpaceMismatch, "open code must live in P(N)");
    if (!u.complete) throw Error(ErrorKind::MissingConstituents, "open code is not a complete list");
    Expression e;
    for (const auto& b : u.basics) e.disjuncts.push_back(b.set.mask());
    return normalize(e);
}

Pi02Code frame_to_pi02(const Presentation& pres) {
    Pi02Code X;
    X.kind = SpaceKind::PN;
    X.complete = true;
    for (std::size_t i = 0; i < pres.rels.size(); ++i) {
        const auto& [u, v] = pres.rels[i];
        X.pairs.push_back({expression_open(v), expression_open(u), i});
    }
    return X;
}

Presentation pi02_to_frame(const Pi02Code& X, std::optional<unsigned> gens) {
    if (X.kind != SpaceKind::PN) throw Error(ErrorKind::SpaceMismatch, "code must live in P(N)");
    if (!X.complete) throw Error(ErrorKind::MissingConstituents, "constituent list is not complete");
    Presentation pres;
    pres.name = "frame(pi02)";
    Index top = 0;
    for (const auto& p : X.pairs) {
        pres.rels.emplace_back(open_expression(p.coA), open_expression(p.B));
        for (const OpenCode* u : {&p.B, &p.coA})
            for (const auto& b : u->basics)
                if (auto m = b.set.max()) top = std::max(top, *m + 1);
    }
    if (gens && *gens < top) throw Error(ErrorKind::BadArgument, "generator count below the largest index used");
    pres.gens = gens ? *gens : static_cast<unsigned>(top);
    return pres;
}

}  // namespace qpk
