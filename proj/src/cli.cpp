#include "qpk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qpk/convert.hpp"
#include "qpk/dsl.hpp"

namespace qpk::cli {

using Json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string command;
    std::vector<std::string> targets;
    std::string file;
    std::string format = "text";
    std::size_t depth = 0;
    /// -1: the command's own default
    int precision = -1;
    int precision_or(int def) const { return precision < 0 ? def : precision; }
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    int exhaustive = -1;
    std::string kind;
    std::string to;
    Index cutoff = 0;
    std::string reading = "lattice";
};

struct Outcome {
    Json report;
    int code = 0;
    /// text mode prints this verbatim after the report when set
    std::string body;
};

// ---------------------------------------------------------------------------
// Rendering

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void render(const Json& j, std::ostream& out, int indent) {
    const std::string pad(indent * 2, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (v.is_object()) {
            out << pad << it.key() << ":\n";
            render(v, out, indent + 1);
        } else if (v.is_array()) {
            const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
            if (flat) {
                out << pad << it.key() << ": [";
                for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
                out << "]\n";
            } else {
                out << pad << it.key() << ":\n";
                for (const auto& e : v) {
                    if (e.is_object()) {
                        out << pad << "  -\n";
                        render(e, out, indent + 2);
                    } else {
                        out << pad << "  - " << e.dump() << "\n";
                    }
                }
            }
        } else {
            out << pad << it.key() << ": " << scalar_text(v) << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Helpers

Document load(const Options& o, std::istream& in) {
    std::stringstream ss;
    if (!o.file.empty()) {
        std::ifstream f(o.file, std::ios::binary);
        if (!f) throw Error(ErrorKind::BadArgument, "cannot read " + o.file);
        ss << f.rdbuf();
    } else {
        ss << in.rdbuf();
    }
    return parse(ss.str());
}

const std::string& target(const Options& o, std::size_t i, const char* what) {
    if (o.targets.size() <= i) throw Error(ErrorKind::BadArgument, std::string("missing ") + what);
    return o.targets[i];
}

std::string set_label(const CountablePoset& P, const IndexSet& S) {
    std::string out = "{";
    for (std::size_t i = 0; i < S.size(); ++i) out += (i ? "," : "") + P.label(S[i]);
    return out + "}";
}

FilterStream stream_of(const CountablePoset& P, const IndexSet& S) {
    return filter_from_membership(P, [&S](Index p) { return std::binary_search(S.begin(), S.end(), p); }, *P.bound());
}

std::string verdict_name(FilterEq::Verdict v) {
    switch (v) {
        case FilterEq::EqualAtDepth: return "EqualAtDepth";
        case FilterEq::Distinct: return "Distinct";
        default: return "Unknown";
    }
}

Json frame_point_json(const Presentation& pres, const FramePoint& p) {
    Json stages = Json::array();
    for (GenSet s : p.stages) stages.push_back(pres.show(Expression::conj(s)));
    return Json{{"stages", stages}, {"total", p.total}};
}

const char* prec_name(PrecResult::Verdict v) {
    return v == PrecResult::Holds ? "Holds" : v == PrecResult::Refuted ? "Refuted" : "Unknown";
}
const char* derive_name(DeriveResult::Verdict v) {
    return v == DeriveResult::Proved ? "Proved" : v == DeriveResult::Refuted ? "Refuted" : "Unknown";
}

CountablePoset finite_prefix(const CountablePoset& P, Index cutoff) {
    const auto V = P.valid_below(cutoff);
    std::vector<std::string> labels;
    std::vector<std::vector<bool>> le(V.size(), std::vector<bool>(V.size()));
    for (std::size_t i = 0; i < V.size(); ++i) {
        labels.push_back(P.label(V[i]));
        for (std::size_t j = 0; j < V.size(); ++j) le[i][j] = P.leq(V[i], V[j]);
    }
    return CountablePoset::finite(labels, le);
}

/// Frame expressions with at most two disjuncts of at most two generators.
std::vector<Expression> small_expressions(unsigned gens) {
    std::vector<GenSet> conj{0};
    for (unsigned a = 0; a < gens; ++a) {
        conj.push_back(GenSet{1} << a);
        for (unsigned b = a + 1; b < gens; ++b) conj.push_back((GenSet{1} << a) | (GenSet{1} << b));
    }
    std::set<Expression> out{Expression::bot()};
    for (std::size_t i = 0; i < conj.size(); ++i) {
        out.insert(normalize(Expression{{conj[i]}}));
        for (std::size_t j = i + 1; j < conj.size(); ++j) out.insert(normalize(Expression{{conj[i], conj[j]}}));
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// convert

Outcome cmd_convert(const Options& o, std::istream& in) {
    const Document doc = load(o, in);
    const std::string& name = target(o, 0, "block name");
    const Block& b = doc.block(name);
    const std::string to = o.to.empty() ? (b.kind == Block::Pi02 ? "frame" : "pi02") : o.to;
    const Index cutoff = o.cutoff ? o.cutoff : 16;
    const std::size_t depth = o.depth ? o.depth : 4;
    Outcome r;
    r.report["command"] = "convert";
    r.report["block"] = name;
    r.report["kind"] = to_string(b.kind);
    r.report["to"] = to;
    const std::string out_name = name + "_" + to;
    auto fail_target = [&] {
        return Error(ErrorKind::BadArgument, std::string("no conversion from a ") + to_string(b.kind) + " to '" + to + "'");
    };
    switch (b.kind) {
        case Block::Poset: {
            const CountablePoset P = doc.poset(name);
            if (to == "pi02") {
                const UfPi02 u = uf_to_pi02(P, cutoff, depth);
                r.report["cutoff"] = cutoff;
                r.report["levels"] = depth;
                r.report["constituents"] = u.B.pairs.size();
                r.body = write_pi02(out_name, u.B);
            } else if (to == "npuf-pi02") {
                const Pi02Code X = npuf_to_pi02(P, cutoff);
                r.report["cutoff"] = cutoff;
                r.report["constituents"] = X.pairs.size();
                r.body = write_pi02(out_name, X);
            } else if (to == "handy" || to == "allfilters" || to == "npuf" || to == "np") {
                const PosetIso iso = to == "handy"        ? handyfy_uf(P)
                                     : to == "allfilters" ? handyfy_allfilters(P)
                                     : to == "npuf"       ? np_to_npuf(P)
                                                          : npuf_to_np(P);
                r.report["cutoff"] = cutoff;
                r.body = "# indices below " + std::to_string(cutoff) + "\n" +
                         write_poset(out_name, finite_prefix(iso.target, cutoff));
            } else {
                throw fail_target();
            }
            break;
        }
        case Block::Frame: {
            if (to != "pi02") throw fail_target();
            const Pi02Code X = frame_to_pi02(doc.frame(name));
            r.report["constituents"] = X.pairs.size();
            r.body = write_pi02(out_name, X);
            break;
        }
        case Block::Pi02: {
            const Pi02Code X = doc.pi02(name);
            if (to == "frame") {
                const Presentation pres = pi02_to_frame(X);
                r.report["generators"] = pres.gens;
                r.body = write_frame(out_name, pres);
            } else if (to == "npuf" || to == "uf") {
                const CountablePoset P = to == "npuf" ? pi02_to_npuf(X).P : pi02_to_uf(X, depth).P;
                if (to == "uf") r.report["exact"] = pi02_to_uf(X, depth).exact;
                r.report["cutoff"] = cutoff;
                r.body = "# indices below " + std::to_string(cutoff) + "\n" + write_poset(out_name, finite_prefix(P, cutoff));
            } else if (to == "dense") {
                const DenseKind k = parse_dense_kind(o.kind.empty() ? "gdelta" : o.kind);
                auto seq = dense_sequence(X, k, depth);
                r.report["set"] = to_string(k);
                r.report["scale"] = depth;
                if (!seq) {
                    r.report["points"] = "undetermined";
                    r.code = 2;
                } else {
                    r.report["points"] = seq->size();
                    for (std::size_t i = 0; i < seq->size(); ++i) r.body += write_point(out_name + std::to_string(i), (*seq)[i]);
                }
            } else {
                throw fail_target();
            }
            break;
        }
        default: throw fail_target();
    }
    return r;
}

// ---------------------------------------------------------------------------
// prove

Outcome cmd_prove(const Options& o, std::istream& in) {
    const Document doc = load(o, in);
    const std::string& name = target(o, 0, "frame or goal block");
    Presentation pres;
    Expression a, b;
    std::string goal_text;
    if (doc.block(name).kind == Block::Goal) {
        auto g = doc.goal(name);
        pres = g.pres;
        a = g.a;
        b = g.b;
    } else {
        pres = doc.frame(name);
        goal_text = target(o, 1, "goal \"a <= b\"");
        std::tie(a, b) = parse_goal(goal_text, pres);
    }
    const BaseReading reading = o.reading == "literal" ? BaseReading::Literal : BaseReading::Lattice;
    if (o.reading != "literal" && o.reading != "lattice")
        throw Error(ErrorKind::BadArgument, "reading must be lattice or literal");
    const unsigned depth = static_cast<unsigned>(o.depth ? o.depth : 10);
    FrameProver prover(pres, reading);
    const DeriveResult d = prover.derives(a, b, depth);
    const PrecResult p = prover.prec(a, b);

    Outcome r;
    r.report["command"] = "prove";
    r.report["frame"] = pres.name;
    r.report["goal"] = pres.show(a) + " <= " + pres.show(b);
    r.report["depth"] = depth;
    r.report["reading"] = o.reading;
    r.report["verdict"] = derive_name(d.verdict);
    r.report["prec"] = prec_name(p.verdict);
    if (d.proof) {
        r.report["proof_height"] = d.proof->height();
        r.report["proof_size"] = d.proof->size();
        r.body = show_proof(pres, *d.proof);
        std::istringstream lines(r.body);
        Json arr = Json::array();
        for (std::string l; std::getline(lines, l);) arr.push_back(l);
        r.report["proof"] = arr;
    }
    if (d.witness) r.report["witness"] = frame_point_json(pres, *d.witness);
    r.code = d.verdict == DeriveResult::Proved ? 0 : d.verdict == DeriveResult::Refuted ? 1 : 2;
    return r;
}

// ---------------------------------------------------------------------------
// check suites

Outcome check_quasi_metric(const Options& o) {
    const std::string& name = target(o, 1, "space name");
    const QMSpaceCode s = qm_fixture(name);
    std::vector<Index> samples;
    Json rep;
    rep["suite"] = "quasi-metric";
    rep["space"] = name;
    if (o.exhaustive >= 0) {
        if (o.exhaustive > 8) throw Error(ErrorKind::TooLarge, "exhaustive sweeps stop at 2^8 carrier points");
        const Index n = Index{1} << o.exhaustive;
        for (Index a = 0; a < n && (!s.bound || a < *s.bound); ++a)
            if (s.valid(a)) samples.push_back(a);
        rep["mode"] = "exhaustive";
        rep["carrier_limit"] = n;
    } else {
        std::mt19937_64 rng(o.seed);
        const Index range = s.bound ? *s.bound : Index{1} << 16;
        while (samples.size() < o.samples) {
            const Index a = rng() % range;
            if (s.valid(a)) samples.push_back(a);
        }
        rep["mode"] = "sampled";
        rep["seed"] = o.seed;
    }
    const auto v = axioms_check(s, samples, o.precision_or(20));
    rep["points"] = samples.size();
    rep["triples"] = static_cast<Index>(samples.size()) * samples.size() * samples.size();
    rep["violations"] = v.size();
    Json shown = Json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(v.size(), 5); ++i) {
        const char* k = v[i].kind == AxiomViolation::Negative     ? "negative"
                        : v[i].kind == AxiomViolation::Separation ? "separation"
                                                                  : "triangle";
        shown.push_back({{"axiom", k}, {"a", s.label_of(v[i].a)}, {"b", s.label_of(v[i].b)}, {"c", s.label_of(v[i].c)}});
    }
    if (!v.empty()) rep["first"] = shown;
    rep["result"] = v.empty() ? "PASS" : "FAIL";
    return {rep, v.empty() ? 0 : 1, ""};
}

Outcome check_handy(const Options& o, std::istream& in) {
    const Document doc = load(o, in);
    const std::string& name = target(o, 1, "poset block");
    const CountablePoset P = doc.poset(name);
    const std::size_t depth = o.depth ? o.depth : 8;
    const PosetIso iso = handyfy_uf(P);
    const Index cutoff = level_cutoff(P, depth);
    // predecessors in the pair-coded case can sit several levels further out
    const Index extended = P.is_finite() ? cutoff + iso.target.block : level_cutoff(P, 2 * depth + 2);
    const HandyReport hr = handy_check(iso.target, cutoff, extended);
    Json rep;
    rep["suite"] = "handy";
    rep["poset"] = name;
    rep["depth"] = depth;
    rep["handy"] = hr.ok();
    rep["no_predecessor"] = hr.no_predecessor.size();
    rep["bounded_chains"] = hr.bounded_chains.size();
    bool ok = hr.ok();
    if (P.is_finite()) {
        const auto en = enumerate_filters(P);
        Json trips = Json::array();
        for (const auto& S : en.uf) {
            const FilterStream F = stream_of(P, S);
            const FilterStream G = iso_forward(iso, F, cutoff, depth);
            const FilterStream F2 = iso_backward(iso, G, *P.bound(), depth);
            const auto eq = filters_equal(P, F, F2, depth).verdict;
            ok = ok && eq == FilterEq::EqualAtDepth;
            trips.push_back({{"filter", set_label(P, S)}, {"round_trip", verdict_name(eq)}});
        }
        rep["uf_filters"] = en.uf.size();
        rep["round_trips"] = trips;
    }
    rep["result"] = ok ? "PASS" : "FAIL";
    return {rep, ok ? 0 : 1, ""};
}

Outcome roundtrip_frame(const Presentation& pres, Json rep) {
    const Pi02Code X = frame_to_pi02(pres);
    const Presentation back = pi02_to_frame(X, pres.gens);
    const auto pts = enumerate_points(pres);
    const auto pts2 = enumerate_points(back);
    std::size_t agree = 0;
    const std::uint64_t n = std::uint64_t{1} << pres.gens;
    for (std::uint64_t m = 0; m < n; ++m) {
        const bool in_frame = satisfies_relations(pres, m);
        const bool in_code = member_at(view_finite(FinSet::from_mask(m)), X, SIZE_MAX) == Tri::Yes;
        agree += in_frame == in_code;
    }
    const bool ok = pts == pts2 && agree == n;
    rep["valuations"] = n;
    rep["points"] = pts.size();
    rep["points_after_round_trip"] = pts2.size();
    rep["code_agreements"] = agree;
    rep["result"] = ok ? "PASS" : "FAIL";
    return {rep, ok ? 0 : 1, ""};
}

Outcome check_roundtrip(const Options& o, std::istream& in) {
    const std::string& name = target(o, 1, "block or space name");
    Json rep;
    rep["suite"] = "roundtrip";
    rep["target"] = name;
    if (name == "cantor" || name == "pn") {
        const QMSpaceCode s = qm_fixture(name);
        const QmUf q = qm_to_uf(s);
        const std::size_t depth = o.depth ? o.depth : 8;
        const int prec = o.precision_or(8);
        std::mt19937_64 rng(o.seed);
        std::size_t psi_ok = 0, phi_ok = 0;
        for (std::size_t i = 0; i < o.samples; ++i) {
            const Index bits = rng() & 0xffffff;
            const QMPoint x{[bits](std::size_t n) { return n >= 63 ? bits : bits & ((Index{1} << (n + 1)) - 1); }};
            const FilterStream F = q.phi(x);
            const QMPoint y = q.psi(F);
            psi_ok += points_equal_at(s, x, y, prec) == Tri::Yes;
            phi_ok += filters_equal(q.P, F, q.phi(y), depth).verdict == FilterEq::EqualAtDepth;
        }
        rep["seed"] = o.seed;
        rep["samples"] = o.samples;
        rep["precision"] = prec;
        rep["depth"] = depth;
        rep["psi_phi_identity"] = psi_ok;
        rep["phi_psi_identity"] = phi_ok;
        const bool ok = psi_ok == o.samples && phi_ok == o.samples;
        rep["result"] = ok ? "PASS" : "FAIL";
        return {rep, ok ? 0 : 1, ""};
    }
    const Document doc = load(o, in);
    const Block& b = doc.block(name);
    if (b.kind == Block::Frame) return roundtrip_frame(doc.frame(name), rep);
    if (b.kind == Block::Pi02) {
        Presentation pres = pi02_to_frame(doc.pi02(name));
        pres.name = name;
        return roundtrip_frame(pres, rep);
    }
    if (b.kind == Block::Poset) {
        Options h = o;
        Outcome r = check_handy(h, in);
        r.report["suite"] = "roundtrip";
        return r;
    }
    throw Error(ErrorKind::KindMismatch, "no round trip for a " + std::string(to_string(b.kind)));
}

Outcome check_frame_triad(const Options& o, std::istream& in) {
    const Document doc = load(o, in);
    const std::string& name = target(o, 1, "frame block");
    const Presentation pres = doc.frame(name);
    if (pres.gens > 4) throw Error(ErrorKind::TooLarge, "frame-triad sweeps stop at 4 generators");
    const unsigned depth = static_cast<unsigned>(o.depth ? o.depth : 10);
    const auto exprs = small_expressions(pres.gens);
    const auto pts = enumerate_points(pres);
    FrameProver prover(pres);
    std::size_t goals = 0, prec_agree = 0, derive_unknown = 0, derive_disagree = 0, bad_witness = 0;
    Json issues = Json::array();
    for (const auto& a : exprs)
        for (const auto& b : exprs) {
            ++goals;
            bool sem = true;
            for (GenSet x : pts)
                if (holds_in(x, a) && !holds_in(x, b)) sem = false;
            const PrecResult p = prover.prec(a, b);
            const bool pa = p.verdict != PrecResult::Unknown && (p.verdict == PrecResult::Holds) == sem;
            prec_agree += pa;
            const DeriveResult d = prover.derives(a, b, depth);
            if (d.verdict == DeriveResult::Unknown) {
                ++derive_unknown;
            } else if ((d.verdict == DeriveResult::Proved) != (p.verdict == PrecResult::Holds)) {
                ++derive_disagree;
            }
            if (d.witness) {
                const GenSet w = d.witness->final_set();
                if (!satisfies_relations(pres, w) || !holds_in(w, a) || holds_in(w, b)) ++bad_witness;
            }
            if ((!pa || (d.verdict != DeriveResult::Unknown && (d.verdict == DeriveResult::Proved) != sem)) &&
                issues.size() < 5)
                issues.push_back(pres.show(a) + " <= " + pres.show(b));
        }
    const bool ok = prec_agree == goals && derive_disagree == 0 && bad_witness == 0 && derive_unknown * 20 < goals;
    Json rep;
    rep["suite"] = "frame-triad";
    rep["frame"] = name;
    rep["depth"] = depth;
    rep["goals"] = goals;
    rep["points"] = pts.size();
    rep["prec_agrees"] = prec_agree;
    rep["derives_unknown"] = derive_unknown;
    rep["derives_disagrees"] = derive_disagree;
    rep["bad_witnesses"] = bad_witness;
    if (!issues.empty()) rep["issues"] = issues;
    rep["result"] = ok ? "PASS" : "FAIL";
    return {rep, ok ? 0 : 1, ""};
}

Outcome cmd_check(const Options& o, std::istream& in) {
    const std::string& suite = target(o, 0, "suite name");
    Outcome r;
    if (suite == "quasi-metric") r = check_quasi_metric(o);
    else if (suite == "handy") r = check_handy(o, in);
    else if (suite == "roundtrip") r = check_roundtrip(o, in);
    else if (suite == "frame-triad") r = check_frame_triad(o, in);
    else throw Error(ErrorKind::UnknownName, "no suite '" + suite + "' (quasi-metric, handy, roundtrip, frame-triad)");
    Json out;
    out["command"] = "check";
    for (auto it = r.report.begin(); it != r.report.end(); ++it) out[it.key()] = it.value();
    r.report = out;
    return r;
}

// ---------------------------------------------------------------------------
// enumerate

Outcome cmd_enumerate(const Options& o, std::istream& in) {
    const std::string& what = target(o, 0, "what to enumerate (filters, points, inhabitants)");
    const Document doc = load(o, in);
    const std::string& name = target(o, 1, "block name");
    Outcome r;
    r.report["command"] = "enumerate";
    r.report["what"] = what;
    r.report["block"] = name;
    if (what == "filters") {
        const CountablePoset P = doc.poset(name);
        const auto en = enumerate_filters(P);
        const std::string kind = o.kind.empty() ? "all" : o.kind;
        const std::vector<IndexSet>* list = kind == "all" ? &en.all
                                            : kind == "uf" ? &en.uf
                                            : kind == "np" ? &en.np
                                            : kind == "mf" ? &en.mf
                                                           : nullptr;
        if (!list) throw Error(ErrorKind::BadArgument, "kind must be all, uf, np or mf");
        r.report["kind"] = kind;
        r.report["count"] = list->size();
        Json arr = Json::array();
        for (const auto& S : *list) arr.push_back(set_label(P, S));
        r.report["filters"] = arr;
    } else if (what == "points") {
        const Presentation pres = doc.frame(name);
        const auto pts = enumerate_points(pres);
        r.report["count"] = pts.size();
        Json arr = Json::array();
        for (GenSet x : pts) arr.push_back(pres.show(Expression::conj(x)));
        r.report["points"] = arr;
    } else if (what == "inhabitants") {
        const CountablePoset base = doc.poset(name);
        const std::size_t stage = o.depth ? o.depth : 4;
        const Index k = base.is_finite() ? std::max<Index>(*base.bound(), 1) : 1;
        const Index levels = std::max<Index>(stage, (stage + k - 1) / k + 1);
        const CountablePoset H = handyfy_uf(base).target;
        const Index window = level_cutoff(base, levels);
        const UfPi02 u = uf_to_pi02(H, window, stage);
        const auto xs = stage_inhabitants(u, stage, window);
        r.report["stage"] = stage;
        r.report["window"] = window;
        r.report["count"] = xs.size();
        Json arr = Json::array();
        for (const auto& x : xs) arr.push_back(x.str());
        r.report["inhabitants"] = arr;
    } else {
        throw Error(ErrorKind::UnknownName, "cannot enumerate '" + what + "' (filters, points, inhabitants)");
    }
    return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    Options o;
    CLI::App app{"qpk: representations of quasi-Polish spaces"};
    app.require_subcommand(1);
    auto common = [&o](CLI::App* c) {
        c->add_option("targets", o.targets, "suite, block names, goal");
        c->add_option("-f,--file", o.file, "document (default: stdin)");
        c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        c->add_option("--depth", o.depth, "search depth / levels / stage");
        c->add_option("--precision", o.precision, "precision exponent");
        c->add_option("--samples", o.samples, "number of samples");
        c->add_option("--seed", o.seed, "sampling seed");
        c->add_option("--exhaustive", o.exhaustive, "sweep all carrier points below 2^k");
        c->add_option("--kind", o.kind, "filter kind or dense set kind");
        c->add_option("--to", o.to, "conversion target");
        c->add_option("--cutoff", o.cutoff, "index cutoff for infinite objects");
        c->add_option("--reading", o.reading, "lattice or literal base rule");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"convert", "translate a block between representations"},
        {"prove", "decide a <= b in a frame presentation"},
        {"check", "run a property suite (quasi-metric, handy, roundtrip, frame-triad)"},
        {"enumerate", "list filters, frame points or window inhabitants"},
    };
    for (const auto& [name, about] : commands) {
        CLI::App* c = app.add_subcommand(name, about);
        common(c);
        c->callback([&o, name] { o.command = name; });
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 10 + static_cast<int>(ErrorKind::BadArgument);
    }

    try {
        Outcome r;
        if (o.command == "convert") r = cmd_convert(o, in);
        else if (o.command == "prove") r = cmd_prove(o, in);
        else if (o.command == "check") r = cmd_check(o, in);
        else r = cmd_enumerate(o, in);
        if (o.format == "json") {
            if (!r.body.empty() && o.command == "convert") r.report["output"] = r.body;
            out << r.report.dump(2) << "\n";
        } else {
            render(r.report, out, 0);
            if (!r.body.empty() && o.command == "convert") out << "\n" << r.body;
        }
        return r.code;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace qpk::cli
