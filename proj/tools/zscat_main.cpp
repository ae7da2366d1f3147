#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zs/reconstruct.hpp"
#include "zs/schrodinger.hpp"
#include "zs/serialize.hpp"

namespace {

using zs::cplx;

struct Opts {
    std::string potential;
    std::string kspec;
    std::string region_spec;
    std::string data;
    std::string xs_spec;
    double contour_c = 1.0;
    double contour_L = 20.0;
    double margin = 0.05;
    double tol = 1e-10;
    std::string out;
    std::string format = "json";
};

nlohmann::json load_json_arg(const std::string& arg, const char* what) {
    if (arg.empty()) throw zs::InputError(std::string("missing ") + what);
    if (!arg.empty() && arg.front() == '{') return nlohmann::json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw zs::InputError(std::string("cannot open ") + what + " file: " + arg);
    return nlohmann::json::parse(in);
}

std::vector<double> parse_grid(const std::string& spec, const char* what) {
    if (spec.empty()) throw zs::InputError(std::string("missing ") + what + " specification");
    std::vector<double> vals;
    if (spec.find(':') != std::string::npos) {
        double start, stop;
        int count;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1 ||
            !ss.eof())
            throw zs::InputError(std::string(what) + " linspace must be start:stop:count");
        for (int i = 0; i < count; ++i)
            vals.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size())
                throw zs::InputError(std::string("bad number in ") + what + ": " + tok);
            vals.push_back(v);
        }
        if (vals.empty()) throw zs::InputError(std::string("empty ") + what + " list");
    }
    return vals;
}

std::vector<double> parse_ks(const std::string& spec) {
    auto ks = parse_grid(spec, "--k");
    for (double k : ks)
        if (k == 0.0)
            throw zs::ContractViolation("k = 0 is outside the domain of every operation");
    return ks;
}

zs::Box parse_region(const std::string& spec, const zs::Box& fallback) {
    if (spec.empty()) return fallback;
    auto v = parse_grid(spec, "--region");
    if (v.size() != 4) throw zs::InputError("--region needs re0,re1,im0,im1");
    return {v[0], v[1], v[2], v[3]};
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw zs::InputError("cannot open output file: " + path);
    out << text;
}

nlohmann::json base_config(const std::string& command, const Opts& o) {
    nlohmann::json c;
    c["command"] = command;
    c["tol"] = o.tol;
    c["format"] = o.format;
    return c;
}

void embed_contour(nlohmann::json& config, const zs::Contour& ct) {
    config["contour"] = {{"elevation", ct.elevation},
                         {"half_length", ct.half_length},
                         {"margin", ct.margin}};
}

void emit_json(nlohmann::json payload, const nlohmann::json& config, const Opts& o) {
    payload["config"] = config;
    write_output(zs::dump_json(payload), o.out);
}

void emit_csv(const std::string& body, const nlohmann::json& config, const Opts& o) {
    write_output("# config: " + config.dump() + "\n" + body, o.out);
}

void require_json_format(const Opts& o, const char* cmd) {
    if (o.format != "json")
        throw zs::InputError(std::string(cmd) + " emits a structured report; use --format json");
}

// ---------- subcommand bodies ----------

void run_scatter(const Opts& o) {
    zs::PotentialPair p = zs::make_potential(load_json_arg(o.potential, "--potential"));
    zs::Contour ct = zs::build_contour(p, o.contour_c, o.contour_L, o.margin);
    std::vector<double> ks = parse_ks(o.kspec);
    std::vector<cplx> kc;
    for (double k : ks) kc.emplace_back(k, 0.0);
    zs::ScatterOptions sopt;
    sopt.rtol = o.tol;
    auto grid = zs::scatter_grid(p, kc, ct, sopt);

    nlohmann::json config = base_config("scatter", o);
    config["potential"] = p.record;
    config["k"] = ks;
    embed_contour(config, ct);
    if (o.format == "csv") {
        emit_csv(zs::scattering_csv(grid), config, o);
    } else {
        nlohmann::json payload;
        payload["grid"] = nlohmann::json::array();
        for (const auto& e : grid) payload["grid"].push_back(zs::to_json(e));
        emit_json(payload, config, o);
    }
}

void run_spectrum(const Opts& o) {
    require_json_format(o, "spectrum");
    zs::PotentialPair p = zs::make_potential(load_json_arg(o.potential, "--potential"));
    zs::Contour ct = zs::build_contour(p, o.contour_c, o.contour_L, o.margin);
    zs::Box region = parse_region(o.region_spec, {-5.0, 5.0, 0.05, 5.0});
    zs::ExtractOptions eopt;
    eopt.rtol = std::min(o.tol, eopt.rtol);
    zs::SpectrumResult sr = zs::extract_discrete_data(p, ct, region, eopt);

    nlohmann::json config = base_config("spectrum", o);
    config["potential"] = p.record;
    config["region"] = {region.re0, region.re1, region.im0, region.im1};
    embed_contour(config, ct);
    nlohmann::json payload;
    payload["spectrum"] = zs::to_json(sr);
    emit_json(payload, config, o);
}

void run_reconstruct(const Opts& o) {
    zs::ReconstructionInput input =
        zs::reconstruction_input_from_json(load_json_arg(o.data, "--data"));
    std::vector<double> xs = o.xs_spec.empty() ? parse_grid("-4:4:81", "--xs")
                                               : parse_grid(o.xs_spec, "--xs");
    zs::RecoveredPotential rec = zs::recover_potentials(input, xs);

    nlohmann::json config = base_config("reconstruct", o);
    config["data"] = zs::to_json(input);
    config["xs"] = xs;
    if (o.format == "csv") {
        emit_csv(zs::potential_csv(rec.samples), config, o);
    } else {
        nlohmann::json payload;
        payload["recovered"] = zs::to_json(rec);
        emit_json(payload, config, o);
    }
}

void run_roundtrip(const Opts& o) {
    require_json_format(o, "roundtrip");
    zs::PotentialPair p = zs::make_potential(load_json_arg(o.potential, "--potential"));
    zs::Contour ct = zs::build_contour(p, o.contour_c, o.contour_L, o.margin);
    zs::Box region = parse_region(o.region_spec, {-5.0, 5.0, 0.05, 5.0});
    zs::RoundtripOptions ropt;
    if (!o.xs_spec.empty()) ropt.xs = parse_grid(o.xs_spec, "--xs");
    if (!o.kspec.empty()) ropt.test_ks = parse_ks(o.kspec);
    zs::RoundtripReport rep = zs::roundtrip(p, ct, region, ropt);

    nlohmann::json config = base_config("roundtrip", o);
    config["potential"] = p.record;
    config["region"] = {region.re0, region.re1, region.im0, region.im1};
    embed_contour(config, ct);
    nlohmann::json payload;
    payload["roundtrip"] = zs::to_json(rep);
    emit_json(payload, config, o);
}

void run_check_symmetry(const Opts& o) {
    require_json_format(o, "check-symmetry");
    zs::PotentialPair p = zs::make_potential(load_json_arg(o.potential, "--potential"));
    if (p.symmetry == zs::Reduction::None)
        throw zs::InputError("the potential carries no reduction to check");
    zs::Contour ct = zs::build_contour(p, o.contour_c, o.contour_L, o.margin);
    std::vector<double> ks = parse_ks(o.kspec);
    // the identities compare k against -k (and conj k, which is k itself on
    // the real axis), so augment the grid with the missing partners
    std::vector<double> full = ks;
    for (double k : ks) {
        bool have = false;
        for (double other : full)
            if (std::abs(other + k) < 1e-12) have = true;
        if (!have) full.push_back(-k);
    }
    std::vector<zs::ScatteringData> grid;
    for (double k : full) grid.push_back(zs::scatter_at(p, cplx(k, 0.0), ct));
    double dev = zs::check_symmetry_relations(grid, p.symmetry);

    nlohmann::json config = base_config("check-symmetry", o);
    config["potential"] = p.record;
    config["k"] = full;
    embed_contour(config, ct);
    nlohmann::json payload;
    payload["reduction"] = zs::to_string(p.symmetry);
    payload["max_deviation"] = dev;
    emit_json(payload, config, o);
}

void run_classify(const Opts& o) {
    require_json_format(o, "classify");
    zs::PotentialPair p = zs::make_potential(load_json_arg(o.potential, "--potential"));
    zs::Contour ct = zs::build_contour(p, o.contour_c, o.contour_L, o.margin);
    std::vector<double> ks = o.kspec.empty() ? std::vector<double>{0.5, 1.0, 2.0}
                                             : parse_ks(o.kspec);
    zs::ReflectionlessReport rr = zs::reflectionless_test(p, ks, ct, 1e-4);
    nlohmann::json stokes = nlohmann::json::array();
    for (double k : ks) {
        zs::ScatteringData sd = zs::scatter_at(p, cplx(k, 0.0), ct);
        nlohmann::json entry;
        entry["k"] = k;
        entry["stokes"] = zs::to_json(zs::stokes_matrices(sd));
        stokes.push_back(entry);
    }

    nlohmann::json config = base_config("classify", o);
    config["potential"] = p.record;
    config["k"] = ks;
    embed_contour(config, ct);
    nlohmann::json payload;
    payload["reflectionless"] = zs::to_json(rr);
    payload["stokes"] = stokes;
    emit_json(payload, config, o);
}

void run_schrodinger_form(const Opts& o) {
    zs::PotentialPair p = zs::make_potential(load_json_arg(o.potential, "--potential"));
    zs::SchrodingerForm sf = zs::schrodinger_form(p);
    std::vector<double> xs = o.xs_spec.empty() ? parse_grid("-3:3:25", "--xs")
                                               : parse_grid(o.xs_spec, "--xs");
    nlohmann::json config = base_config("schrodinger-form", o);
    config["potential"] = p.record;
    config["xs"] = xs;

    nlohmann::json samples = nlohmann::json::array();
    std::string csv = "x,u1_re,u1_im,u2_re,u2_im\n";
    for (double x : xs) {
        nlohmann::json e;
        e["x"] = x;
        try {
            cplx u1 = sf.u1_eval(cplx(x, 0.0));
            cplx u2 = sf.u2_eval(cplx(x, 0.0));
            e["u1"] = zs::complex_to_json(u1);
            e["u2"] = zs::complex_to_json(u2);
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, u1.real(),
                          u1.imag(), u2.real(), u2.imag());
            csv += buf;
        } catch (const std::exception& ex) {
            e["error"] = ex.what();
            csv += "# error, " + std::to_string(x) + ", " + std::string(ex.what()) + "\n";
        }
        samples.push_back(e);
    }

    if (o.format == "csv") {
        emit_csv(csv, config, o);
        return;
    }
    nlohmann::json payload;
    payload["samples"] = samples;
    nlohmann::json orders;
    orders["order_u1"] =
        sf.order_u1_at_infinity ? nlohmann::json(*sf.order_u1_at_infinity) : nullptr;
    orders["order_u2"] =
        sf.order_u2_at_infinity ? nlohmann::json(*sf.order_u2_at_infinity) : nullptr;
    orders["m1"] = sf.m1 ? nlohmann::json(*sf.m1) : nullptr;
    orders["m2"] = sf.m2 ? nlohmann::json(*sf.m2) : nullptr;
    payload["orders"] = orders;
    emit_json(payload, config, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forward and inverse scattering for the 2x2 Zakharov-Shabat system on a "
                 "pole-avoiding contour"};
    app.require_subcommand(1);
    Opts o;

    auto add_common = [&](CLI::App* sub, bool needs_potential) {
        if (needs_potential)
            sub->add_option("--potential", o.potential,
                            "potential constructor record: a JSON file path, or inline JSON "
                            "starting with '{'");
        sub->add_option("--contour-c", o.contour_c, "initial contour elevation (ladder start)");
        sub->add_option("--contour-L", o.contour_L, "contour half-length");
        sub->add_option("--margin", o.margin, "minimum pole clearance of the contour");
        sub->add_option("--tol", o.tol, "integration tolerance");
        sub->add_option("--out", o.out, "output file (default: stdout)");
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* scatter = app.add_subcommand("scatter", "scattering coefficients on a k-grid");
    add_common(scatter, true);
    scatter->add_option("--k", o.kspec, "k values: comma list or start:stop:count");
    scatter->callback([&] { run_scatter(o); });

    CLI::App* spectrum = app.add_subcommand("spectrum", "discrete eigenvalues with their data");
    add_common(spectrum, true);
    spectrum->add_option("--region", o.region_spec, "search rectangle re0,re1,im0,im1");
    spectrum->callback([&] { run_spectrum(o); });

    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "potentials from discrete scattering data");
    add_common(reconstruct, false);
    reconstruct->add_option("--data", o.data,
                            "discrete-data JSON ({\"upper\": [...], \"lower\": [...]}): file "
                            "path or inline");
    reconstruct->add_option("--xs", o.xs_spec, "sample grid: comma list or start:stop:count");
    reconstruct->callback([&] { run_reconstruct(o); });

    CLI::App* roundtrip =
        app.add_subcommand("roundtrip", "extract, reconstruct, and compare end to end");
    add_common(roundtrip, true);
    roundtrip->add_option("--region", o.region_spec, "search rectangle re0,re1,im0,im1");
    roundtrip->add_option("--k", o.kspec, "reflectionless precondition grid");
    roundtrip->add_option("--xs", o.xs_spec, "comparison grid");
    roundtrip->callback([&] { run_roundtrip(o); });

    CLI::App* checksym =
        app.add_subcommand("check-symmetry", "verify the coefficient identities of a reduction");
    add_common(checksym, true);
    checksym->add_option("--k", o.kspec, "k values (missing -k partners are added)");
    checksym->callback([&] { run_check_symmetry(o); });

    CLI::App* classify =
        app.add_subcommand("classify", "reflectionless test and Stokes matrices");
    add_common(classify, true);
    classify->add_option("--k", o.kspec, "k values (default 0.5,1,2)");
    classify->callback([&] { run_classify(o); });

    CLI::App* schrod = app.add_subcommand("schrodinger-form",
                                          "scalar second-order form coefficients u1, u2");
    add_common(schrod, true);
    schrod->add_option("--xs", o.xs_spec, "sample grid");
    schrod->callback([&] { run_schrodinger_form(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << nlohmann::json{{"error", std::string("SchemaError: ") + e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const zs::ContractViolation& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 4;
    } catch (const zs::InputError& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const zs::NumericalError& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
