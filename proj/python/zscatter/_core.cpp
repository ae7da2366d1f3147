// Python bindings: thin JSON-string bridge over the C++ library. Structured
// inputs and outputs travel as JSON text; the pure-python wrapper in
// __init__.py converts to and from dictionaries.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "zs/contour.hpp"
#include "zs/errors.hpp"
#include "zs/potentials.hpp"
#include "zs/reconstruct.hpp"
#include "zs/riccati.hpp"
#include "zs/schrodinger.hpp"
#include "zs/scattering.hpp"
#include "zs/serialize.hpp"
#include "zs/spectrum.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

zs::PotentialPair parse_potential(const std::string& text) {
    return zs::make_potential(json::parse(text));
}

std::string scatter(const std::string& potential, const std::vector<std::complex<double>>& ks) {
    zs::PotentialPair p = parse_potential(potential);
    zs::Contour ct = build_contour(p);
    std::vector<zs::GridEntry> grid = zs::scatter_grid(p, ks, ct);
    json out = json::array();
    for (const zs::GridEntry& e : grid) out.push_back(zs::to_json(e));
    return zs::dump_json(out);
}

std::string spectrum(const std::string& potential, double re_lo, double re_hi, double im_lo,
                     double im_hi) {
    zs::PotentialPair p = parse_potential(potential);
    zs::Contour ct = build_contour(p);
    zs::SpectrumResult sr = zs::extract_discrete_data(p, ct, zs::Box{re_lo, re_hi, im_lo, im_hi});
    return zs::dump_json(zs::to_json(sr));
}

std::string reconstruct(const std::string& data, const std::vector<double>& xs) {
    zs::ReconstructionInput input = zs::reconstruction_input_from_json(json::parse(data));
    zs::RecoveredPotential rp = zs::recover_potentials(input, xs);
    return zs::dump_json(zs::to_json(rp));
}

std::string roundtrip(const std::string& potential, double re_lo, double re_hi, double im_lo,
                      double im_hi) {
    zs::PotentialPair p = parse_potential(potential);
    zs::Contour ct = build_contour(p);
    zs::RoundtripReport rr = zs::roundtrip(p, ct, zs::Box{re_lo, re_hi, im_lo, im_hi});
    return zs::dump_json(zs::to_json(rr));
}

std::string classify(const std::string& potential, const std::vector<double>& sample_points,
                     double tol) {
    zs::PotentialPair p = parse_potential(potential);
    // a declared reduction is authoritative: distinct reductions can agree
    // pointwise on real potentials, so probing cannot tell them apart
    if (p.symmetry != zs::Reduction::None) return zs::to_string(p.symmetry);
    return zs::to_string(zs::classify_symmetry(p, sample_points, tol));
}

std::string schrodinger_orders(const std::string& potential) {
    zs::PotentialPair p = parse_potential(potential);
    zs::SchrodingerForm sf = zs::schrodinger_form(p);
    json out;
    auto put = [&out](const char* key, const std::optional<int>& v) {
        if (v)
            out[key] = *v;
        else
            out[key] = nullptr;
    };
    put("order_u1", sf.order_u1_at_infinity);
    put("order_u2", sf.order_u2_at_infinity);
    put("m1", sf.m1);
    put("m2", sf.m2);
    return zs::dump_json(out);
}

std::vector<std::complex<double>> riccati_series(std::complex<double> q0,
                                                 std::complex<double> q1,
                                                 std::complex<double> q2,
                                                 std::complex<double> q3,
                                                 std::complex<double> r0,
                                                 std::complex<double> k,
                                                 const std::string& branch, int order) {
    zs::RiccatiBranch b;
    if (branch == "regular")
        b = zs::RiccatiBranch::Regular;
    else if (branch == "singular")
        b = zs::RiccatiBranch::Singular;
    else
        throw zs::InputError("branch must be 'regular' or 'singular'");
    return zs::riccati_formal_series<std::complex<double>>(q0, q1, q2, q3, r0, k, b, order);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "forward/inverse scattering for the 2x2 Zakharov-Shabat system";

    py::register_exception<zs::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<zs::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<zs::ContractViolation>(m, "ContractViolation", PyExc_ValueError);

    m.def("scatter", &scatter, py::arg("potential"), py::arg("ks"),
          "compute scattering records on a grid of spectral values; returns JSON text");
    m.def("spectrum", &spectrum, py::arg("potential"), py::arg("re_lo"), py::arg("re_hi"),
          py::arg("im_lo"), py::arg("im_hi"),
          "discrete eigenvalues with norming data in an upper-half-plane box; returns JSON text");
    m.def("reconstruct", &reconstruct, py::arg("data"), py::arg("xs"),
          "rebuild the potential pair from discrete data on the given x samples; returns JSON text");
    m.def("roundtrip", &roundtrip, py::arg("potential"), py::arg("re_lo"), py::arg("re_hi"),
          py::arg("im_lo"), py::arg("im_hi"),
          "forward spectrum, reconstruct, re-scatter, and compare; returns JSON text");
    m.def("classify", &classify, py::arg("potential"),
          py::arg("sample_points") = std::vector<double>{-1.3, -0.4, 0.7, 1.9},
          py::arg("tol") = 1e-10,
          "declared or detected reduction tying r to q; probes pointwise when undeclared");
    m.def("schrodinger_orders", &schrodinger_orders, py::arg("potential"),
          "infinity orders of the scalar second-order form coefficients; returns JSON text");
    m.def("riccati_series", &riccati_series, py::arg("q0"), py::arg("q1"), py::arg("q2"),
          py::arg("q3"), py::arg("r0"), py::arg("k"), py::arg("branch"), py::arg("order") = 4,
          "formal series coefficients of the logarithmic-derivative equation at infinity");
}
