// Python bindings: the CLI entry point plus a few direct calls.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qpk/cli.hpp"
#include "qpk/common.hpp"
#include "qpk/dsl.hpp"
#include "qpk/pn.hpp"
#include "qpk/poset.hpp"

namespace py = pybind11;

namespace {

py::object fraction(const qpk::Rational& r) {
    std::ostringstream s;
    s << r;
    return py::module_::import("fractions").attr("Fraction")(s.str());
}

qpk::ExplicitSubset subset(const std::vector<qpk::Index>& xs) {
    return qpk::ExplicitSubset::finite(qpk::FinSet::from(xs));
}

}  // namespace

PYBIND11_MODULE(_qpk, m) {
    m.doc() = "qpk core";

    static py::exception<qpk::Error> qpk_error(m, "QpkError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const qpk::Error& e) {
            PyErr_SetObject(qpk_error.ptr(), py::make_tuple(e.what(), e.exit_code()).ptr());
        }
    });

    m.def(
        "run",
        [](const std::vector<std::string>& args, const std::string& stdin_text) {
            std::ostringstream out, err;
            std::istringstream in(stdin_text);
            const int code = qpk::cli::run(args, out, err, in);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), py::arg("stdin") = "", "Run one qpk command; returns (exit code, stdout, stderr).");

    m.def(
        "distance",
        [](const std::vector<qpk::Index>& f, const std::vector<qpk::Index>& g) {
            return fraction(qpk::d_exact(subset(f), subset(g)));
        },
        py::arg("f"), py::arg("g"), "d(F, G) on finite sets of naturals as a Fraction.");

    m.def(
        "filters",
        [](const std::string& text, const std::string& name) {
            const auto en = qpk::enumerate_filters(qpk::parse(text).poset(name));
            py::dict d;
            d["all"] = en.all;
            d["uf"] = en.uf;
            d["np"] = en.np;
            d["mf"] = en.mf;
            return d;
        },
        py::arg("text"), py::arg("name"), "Filters of a finite poset block, as index lists.");
}
