#include "zs/serialize.hpp"

#include <charconv>
#include <cmath>

namespace zs {

namespace {

std::string fmt(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json opt_complex(const std::optional<cplx>& z) {
    if (!z) return nullptr;
    return complex_to_json(*z);
}

void csv_complex(std::string& out, const std::optional<cplx>& z) {
    if (z) {
        out += fmt(z->real());
        out += ',';
        out += fmt(z->imag());
    } else {
        out += ',';
    }
}

}  // namespace

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError("expected a complex number as [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

nlohmann::json to_json(const ScatteringData& sd) {
    nlohmann::json j;
    j["k"] = complex_to_json(sd.k);
    j["a"] = opt_complex(sd.a);
    j["a_bar"] = opt_complex(sd.a_bar);
    j["b"] = opt_complex(sd.b);
    j["b_bar"] = opt_complex(sd.b_bar);
    j["rho"] = opt_complex(sd.rho);
    j["rho_bar"] = opt_complex(sd.rho_bar);
    j["unitarity_residual"] =
        sd.unitarity_residual ? nlohmann::json(*sd.unitarity_residual) : nlohmann::json(nullptr);
    j["wronskian_spread"] = sd.wronskian_spread;
    return j;
}

nlohmann::json to_json(const GridEntry& e) {
    nlohmann::json j;
    j["k"] = complex_to_json(e.k);
    j["data"] = e.data ? to_json(*e.data) : nlohmann::json(nullptr);
    j["error"] = e.error;
    return j;
}

nlohmann::json to_json(const DiscreteEigen& e) {
    nlohmann::json j;
    j["location"] = complex_to_json(e.location);
    j["multiplicity"] = e.multiplicity;
    j["a_derivatives"] = nlohmann::json::array();
    for (cplx v : e.a_derivatives) j["a_derivatives"].push_back(complex_to_json(v));
    j["b_derivatives"] = nlohmann::json::array();
    for (cplx v : e.b_derivatives) j["b_derivatives"].push_back(complex_to_json(v));
    return j;
}

nlohmann::json to_json(const SpectrumResult& sr) {
    nlohmann::json j;
    j["upper"] = nlohmann::json::array();
    for (const auto& e : sr.upper) j["upper"].push_back(to_json(e));
    j["lower"] = nlohmann::json::array();
    for (const auto& e : sr.lower) j["lower"].push_back(to_json(e));
    j["warnings"] = sr.warnings;
    return j;
}

nlohmann::json to_json(const StokesFactorization& st) {
    auto mat = [](const Mat2& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < 2; ++i)
            rows.push_back(
                nlohmann::json::array({complex_to_json(m[i][0]), complex_to_json(m[i][1])}));
        return rows;
    };
    nlohmann::json j;
    j["s_minus"] = mat(st.S_minus);
    j["s_plus"] = mat(st.S_plus);
    j["formal_monodromy"] = st.formal_monodromy;
    j["exponential_torus"] = st.exponential_torus;
    return j;
}

nlohmann::json to_json(const ReflectionlessReport& rr) {
    nlohmann::json j;
    j["reflectionless"] = rr.reflectionless;
    j["worst_k"] = complex_to_json(rr.worst_k);
    j["worst_value"] = rr.worst_value;
    return j;
}

nlohmann::json to_json(const RecoveredPotential& rp) {
    nlohmann::json j;
    j["samples"] = nlohmann::json::array();
    for (const auto& s : rp.samples) {
        nlohmann::json e;
        e["x"] = s.x;
        e["q"] = complex_to_json(s.q);
        e["r"] = complex_to_json(s.r);
        e["singular"] = s.singular;
        e["condition"] = std::isfinite(s.condition) ? nlohmann::json(s.condition)
                                                    : nlohmann::json(nullptr);
        j["samples"].push_back(e);
    }
    j["pole_candidates"] = rp.pole_candidates;
    j["warnings"] = rp.warnings;
    return j;
}

nlohmann::json to_json(const RoundtripReport& rr) {
    nlohmann::json j;
    j["reflectionless"] = to_json(rr.reflectionless);
    j["spectrum"] = to_json(rr.spectrum);
    j["recovered"] = to_json(rr.recovered);
    j["max_rel_deviation_q"] = rr.max_rel_deviation_q;
    j["max_rel_deviation_r"] = rr.max_rel_deviation_r;
    j["max_rescatter_deviation"] = rr.max_rescatter_deviation;
    j["warnings"] = rr.warnings;
    return j;
}

DiscreteEigen discrete_eigen_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("eigen entry must be an object");
    DiscreteEigen e;
    if (!j.contains("location")) throw SchemaError("eigen entry needs a location");
    e.location = complex_from_json(j.at("location"));
    e.multiplicity = j.value("multiplicity", 1);
    if (j.contains("a_derivatives"))
        for (const auto& v : j.at("a_derivatives")) e.a_derivatives.push_back(complex_from_json(v));
    if (j.contains("b_derivatives"))
        for (const auto& v : j.at("b_derivatives")) e.b_derivatives.push_back(complex_from_json(v));
    return e;
}

ReconstructionInput reconstruction_input_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("reconstruction input must be an object");
    ReconstructionInput in;
    if (j.contains("upper"))
        for (const auto& v : j.at("upper")) in.upper.push_back(discrete_eigen_from_json(v));
    if (j.contains("lower"))
        for (const auto& v : j.at("lower")) in.lower.push_back(discrete_eigen_from_json(v));
    validate(in);
    return in;
}

nlohmann::json to_json(const ReconstructionInput& input) {
    nlohmann::json j;
    j["upper"] = nlohmann::json::array();
    for (const auto& e : input.upper) j["upper"].push_back(to_json(e));
    j["lower"] = nlohmann::json::array();
    for (const auto& e : input.lower) j["lower"].push_back(to_json(e));
    return j;
}

std::string scattering_csv(const std::vector<GridEntry>& grid) {
    std::string out =
        "k_re,k_im,a_re,a_im,abar_re,abar_im,b_re,b_im,bbar_re,bbar_im,"
        "unitarity_residual,spread\n";
    for (const auto& e : grid) {
        if (!e.data) {
            out += "# error, " + fmt(e.k.real()) + ", " + fmt(e.k.imag()) + ", " + e.error + "\n";
            continue;
        }
        const ScatteringData& d = *e.data;
        out += fmt(d.k.real());
        out += ',';
        out += fmt(d.k.imag());
        out += ',';
        csv_complex(out, d.a);
        out += ',';
        csv_complex(out, d.a_bar);
        out += ',';
        csv_complex(out, d.b);
        out += ',';
        csv_complex(out, d.b_bar);
        out += ',';
        out += d.unitarity_residual ? fmt(*d.unitarity_residual) : std::string();
        out += ',';
        out += fmt(d.wronskian_spread);
        out += '\n';
    }
    return out;
}

std::string potential_csv(const std::vector<PotentialSample>& samples) {
    std::string out = "x,q_re,q_im,r_re,r_im\n";
    std::string trailer;
    for (const auto& s : samples) {
        if (s.singular) {
            trailer += "# pole_candidate, " + fmt(s.x) + "\n";
            continue;
        }
        out += fmt(s.x);
        out += ',';
        out += fmt(s.q.real());
        out += ',';
        out += fmt(s.q.imag());
        out += ',';
        out += fmt(s.r.real());
        out += ',';
        out += fmt(s.r.imag());
        out += '\n';
    }
    return out + trailer;
}

std::string trajectory_csv(const JostSolution& js) {
    std::string out = "xi,w1_re,w1_im,w2_re,w2_im\n";
    for (size_t i = 0; i < js.xi.size(); ++i) {
        out += fmt(js.xi[i]);
        out += ',';
        out += fmt(js.samples[i][0].real());
        out += ',';
        out += fmt(js.samples[i][0].imag());
        out += ',';
        out += fmt(js.samples[i][1].real());
        out += ',';
        out += fmt(js.samples[i][1].imag());
        out += '\n';
    }
    return out;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace zs
