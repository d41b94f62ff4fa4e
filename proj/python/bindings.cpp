#include <cmath>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nehari/aak.hpp"
#include "nehari/experiments.hpp"
#include "nehari/journe_lab.hpp"
#include "nehari/paraproducts.hpp"
#include "nehari/transforms.hpp"

namespace py = pybind11;
using namespace nehari;
using lab::json;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

int log2_exact(py::ssize_t n) {
    int k = 0;
    while ((py::ssize_t{1} << k) < n) ++k;
    if ((py::ssize_t{1} << k) != n) throw ValidationError("sample count per axis must be a power of two");
    return k;
}

// 1D arrays of length 2^n and square 2D arrays of side 2^n, row-major as on the grid.
Signal to_signal(const CArray& a) {
    if (a.ndim() == 1) return Signal(Grid(log2_exact(a.shape(0)), 1), {a.data(), a.data() + a.size()});
    if (a.ndim() == 2 && a.shape(0) == a.shape(1)) return Signal(Grid(log2_exact(a.shape(0)), 2), {a.data(), a.data() + a.size()});
    throw ValidationError("expected a 1D array or a square 2D array");
}

CArray to_array(const Signal& f) {
    const auto N = static_cast<py::ssize_t>(f.grid().per_axis());
    CArray out = f.grid().dim() == 1 ? CArray({N}) : CArray({N, N});
    std::copy(f.samples().begin(), f.samples().end(), out.mutable_data());
    return out;
}

py::dict bmo_dict(const BmoReport& r) {
    py::dict d;
    d["value"] = r.value;
    d["exact"] = r.exactness == Exactness::exact;
    return d;
}

BmoMode mode_of(const std::string& m) {
    if (m == "exact") return BmoMode::exact;
    if (m == "heuristic") return BmoMode::heuristic;
    throw ValidationError("mode must be exact or heuristic");
}

py::object from_json(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json to_json(const py::object& o) {
    if (py::isinstance<py::str>(o)) return json::parse(o.cast<std::string>());
    return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dyadic harmonic analysis kernels and the experiment harness";
    m.attr("__version__") = NEHARI_VERSION;

    // Translators run newest first, so the subclass goes last.
    const auto& base = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<lab::ConfigError>(m, "ConfigError", base.ptr());

    m.def("catalog", [] {
        py::list out;
        for (const auto& e : lab::experiment_catalog()) {
            py::dict d;
            d["name"] = e.name;
            d["anchor"] = e.anchor;
            d["summary"] = e.summary;
            out.append(d);
        }
        return out;
    });

    m.def(
        "run",
        [](const py::object& config, int threads, std::optional<std::string> out) {
            const auto c = lab::ExperimentConfig::from_json(to_json(config));
            lab::RunResult r;
            {
                py::gil_scoped_release release;
                r = lab::run_experiment(c, threads);
                if (out) lab::write_outputs(r, *out);
            }
            return from_json(r.manifest());
        },
        py::arg("config"), py::arg("threads") = 1, py::arg("out") = py::none(),
        "Runs one experiment from a dict or JSON string; returns the manifest, optionally writing it and the CSV tables.");

    py::class_<lab::Stream>(m, "Stream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream"))
        .def("next", &lab::Stream::next)
        .def("uniform", &lab::Stream::uniform)
        .def("normal", &lab::Stream::normal)
        .def("sign", &lab::Stream::sign);

    m.def("haar_energy", [](const CArray& f) { return haar_analysis(to_signal(f)).energy(); });
    m.def("haar_roundtrip", [](const CArray& f) { return to_array(haar_synthesis(haar_analysis(to_signal(f)))); });
    m.def("hardy_projection", [](const CArray& f) { return to_array(hardy_projection(to_signal(f))); });
    m.def("hilbert_transform", [](const CArray& f, int axis) { return to_array(hilbert_transform(axis, to_signal(f))); },
          py::arg("f"), py::arg("axis") = 0);

    m.def("bmo_dyadic", [](const CArray& b) { return bmo_dict(bmo_dyadic(to_signal(b))); });
    m.def("bmo_rect", [](const CArray& b) { return bmo_dict(bmo_rect(to_signal(b))); });
    m.def("bmo_product", [](const CArray& b, const std::string& mode) { return bmo_dict(bmo_product(to_signal(b), mode_of(mode))); },
          py::arg("b"), py::arg("mode") = "exact");

    m.def("hankel_matrix", [](const std::vector<cplx>& a, std::int64_t M) { return CMatrix(hankel_matrix({0, a}, M).matrix.entries); },
          py::arg("coefficients"), py::arg("M"));
    m.def("hankel_operator", [](const std::vector<cplx>& c) { return CMatrix(hankel_operator_1d(SymbolCoefficients::one_d(c)).matrix.entries); },
          py::arg("coefficients"), "Matrix of P_+ (b conj phi) on modes 0..M-1 for b = sum c_k e_k.");
    m.def("operator_norm", [](const CMatrix& a) { return operator_norm(a); });

    m.def(
        "parrott_min",
        [](const CMatrix& A, const CMatrix& B, const CMatrix& C) {
            const ParrottResult r = parrott_min({A, B, C});
            return py::make_tuple(r.X, r.achieved_norm, r.closed_form);
        },
        py::arg("A"), py::arg("B"), py::arg("C"), "Completes [[X, C], [A, B]]; returns (X, achieved norm, closed form).");

    m.def("para_haar", [](const CArray& b, const CArray& f) { return to_array(para_haar(to_signal(b), to_signal(f))); });
    m.def("commutator_residual", [](const CArray& b) { return decompose_commutator_Gleft(to_signal(b)).residual; });

    m.def(
        "carleson_ratio",
        [](int n, const std::string& layout) {
            const CarlesonLayout l = layout == "staircase"    ? CarlesonLayout::staircase
                                     : layout == "fixed_area" ? CarlesonLayout::fixed_area
                                     : layout == "star"       ? CarlesonLayout::star
                                                              : throw ValidationError("unknown layout " + layout);
            const CarlesonRatio r = carleson_ratio(n, 0, BmoMode::exact, l);
            return py::make_tuple(r.product, r.rect, r.ratio);
        },
        py::arg("n"), py::arg("layout") = "staircase", "(product BMO, rectangular BMO, ratio) of the Carleson family.");
}
