#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "zs/errors.hpp"
#include "zs/serialize.hpp"

using namespace zs;
using nlohmann::json;

TEST_CASE("complex values round-trip as [re, im]") {
    for (cplx z : {cplx(1.5, -2.25), cplx(0.0, 0.0), cplx(-1e-30, 3e17)}) {
        json j = complex_to_json(z);
        REQUIRE(j.is_array());
        REQUIRE(j.size() == 2);
        CHECK(complex_from_json(j) == z);
    }
    // a plain number is accepted as a real value
    CHECK(complex_from_json(json(3.5)) == cplx(3.5, 0.0));
    CHECK(complex_from_json(json(-2)) == cplx(-2.0, 0.0));
}

TEST_CASE("malformed complex values are rejected") {
    CHECK_THROWS_AS(complex_from_json(json::array({1.0})), SchemaError);
    CHECK_THROWS_AS(complex_from_json(json::array({1.0, 2.0, 3.0})), SchemaError);
    CHECK_THROWS_AS(complex_from_json(json("x")), SchemaError);
    CHECK_THROWS_AS(complex_from_json(json::array({true, 2.0})), SchemaError);
}

TEST_CASE("scattering record: sorted keys, null optionals, deterministic dump") {
    ScatteringData sd;
    sd.k = cplx(0.0, 2.0);
    sd.a = cplx(1.0 / 9.0, 0.0);  // only a present: an upper-half-plane record
    sd.wronskian_spread = 3e-11;

    json j = to_json(sd);
    CHECK(j.at("a_bar").is_null());
    CHECK(j.at("b").is_null());
    CHECK(j.at("b_bar").is_null());
    CHECK(j.at("rho").is_null());
    CHECK(j.at("unitarity_residual").is_null());
    CHECK(complex_from_json(j.at("a")) == cplx(1.0 / 9.0, 0.0));

    std::string once = dump_json(j);
    std::string twice = dump_json(to_json(sd));
    CHECK(once == twice);
    CHECK(once.back() == '\n');

    // alphabetical key order in the rendered text
    size_t pa = once.find("\"a\"");
    size_t pab = once.find("\"a_bar\"");
    size_t pb = once.find("\"b\"");
    size_t pk = once.find("\"k\"");
    size_t pw = once.find("\"wronskian_spread\"");
    REQUIRE(pa != std::string::npos);
    CHECK(pa < pab);
    CHECK(pab < pb);
    CHECK(pb < pk);
    CHECK(pk < pw);
}

TEST_CASE("grid entries keep failures alongside data") {
    GridEntry ok;
    ok.k = cplx(1.0, 0.0);
    ScatteringData sd;
    sd.k = ok.k;
    sd.a = cplx(-1.0, 0.0);
    ok.data = sd;
    GridEntry bad;
    bad.k = cplx(0.0, 0.0);
    bad.error = "k = 0 is forbidden";

    json jok = to_json(ok);
    CHECK_FALSE(jok.at("data").is_null());
    CHECK(jok.at("error").get<std::string>().empty());
    json jbad = to_json(bad);
    CHECK(jbad.at("data").is_null());
    CHECK(jbad.at("error") == "k = 0 is forbidden");
}

TEST_CASE("discrete eigen entries round-trip") {
    DiscreteEigen e;
    e.location = cplx(0.0, 1.0);
    e.multiplicity = 2;
    e.a_derivatives = {cplx(-0.5, 0.0), cplx(0.0, 0.0)};
    e.b_derivatives = {cplx(1.0, 0.0), cplx(0.0, 0.0)};

    DiscreteEigen back = discrete_eigen_from_json(to_json(e));
    CHECK(back.location == e.location);
    CHECK(back.multiplicity == 2);
    CHECK(back.a_derivatives == e.a_derivatives);
    CHECK(back.b_derivatives == e.b_derivatives);
}

TEST_CASE("eigen schema: defaults and violations") {
    DiscreteEigen e = discrete_eigen_from_json(json::parse(R"({"location":[0.0,1.0]})"));
    CHECK(e.location == cplx(0.0, 1.0));
    CHECK(e.multiplicity == 1);
    CHECK(e.a_derivatives.empty());

    CHECK_THROWS_AS(discrete_eigen_from_json(json::parse(R"({"multiplicity":2})")), SchemaError);
    CHECK_THROWS_AS(discrete_eigen_from_json(json::parse(R"([1,2])")), SchemaError);
}

TEST_CASE("reconstruction input parses and is validated") {
    json good = json::parse(R"({
        "upper": [{"location": [0.0, 1.0], "a_derivatives": [[0.0, -0.5]],
                   "b_derivatives": [[1.0, 0.0]]}],
        "lower": [{"location": [0.0, -1.0], "a_derivatives": [[0.0, 0.5]],
                   "b_derivatives": [[1.0, 0.0]]}]
    })");
    ReconstructionInput in = reconstruction_input_from_json(good);
    REQUIRE(in.upper.size() == 1);
    REQUIRE(in.lower.size() == 1);
    CHECK(in.upper[0].location == cplx(0.0, 1.0));

    // round-trip through the emitter
    ReconstructionInput again = reconstruction_input_from_json(to_json(in));
    CHECK(again.upper[0].a_derivatives == in.upper[0].a_derivatives);

    // an upper eigen on the wrong side fails validation on parse
    json bad = good;
    bad["upper"][0]["location"] = json::array({0.0, -1.0});
    CHECK_THROWS_AS(reconstruction_input_from_json(bad), InputError);

    CHECK_THROWS_AS(reconstruction_input_from_json(json::parse("[]")), SchemaError);
}

TEST_CASE("scattering csv layout") {
    GridEntry full;
    full.k = cplx(1.0, 0.0);
    {
        ScatteringData sd;
        sd.k = full.k;
        sd.a = cplx(-1.0, 0.0);
        sd.a_bar = cplx(-1.0, 0.0);
        sd.b = cplx(0.0, 0.0);
        sd.b_bar = cplx(0.0, 0.0);
        sd.unitarity_residual = 1e-12;
        sd.wronskian_spread = 2e-11;
        full.data = sd;
    }
    GridEntry partial;  // upper half-plane: only a
    partial.k = cplx(0.0, 2.0);
    {
        ScatteringData sd;
        sd.k = partial.k;
        sd.a = cplx(1.0 / 9.0, 0.0);
        partial.data = sd;
    }
    GridEntry failed;
    failed.k = cplx(0.0, 0.0);
    failed.error = "forbidden";

    std::string csv = scattering_csv({full, partial, failed});
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line ==
          "k_re,k_im,a_re,a_im,abar_re,abar_im,b_re,b_im,bbar_re,bbar_im,"
          "unitarity_residual,spread");
    auto count_fields = [](const std::string& s) {
        size_t n = 1;
        for (char c : s)
            if (c == ',') ++n;
        return n;
    };
    std::getline(is, line);
    CHECK(count_fields(line) == 12);
    CHECK(line.substr(0, 2) == "1,");
    std::getline(is, line);
    CHECK(count_fields(line) == 12);  // absent coefficients leave empty fields
    std::getline(is, line);
    CHECK(line.substr(0, 8) == "# error,");
    CHECK(line.find("forbidden") != std::string::npos);
}

TEST_CASE("potential csv keeps pole candidates as trailing comments") {
    PotentialSample s0{-1.0, cplx(0.5, 0.0), cplx(0.5, 0.0), false, 2.0};
    PotentialSample sp{0.0, cplx(0.0, 0.0), cplx(0.0, 0.0), true,
                       std::numeric_limits<double>::infinity()};
    PotentialSample s1{1.0, cplx(0.25, -0.5), cplx(0.25, 0.5), false, 3.0};
    std::string csv = potential_csv({s0, sp, s1});

    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,q_re,q_im,r_re,r_im");
    std::getline(is, line);
    CHECK(line == "-1,0.5,0,0.5,0");
    std::getline(is, line);
    CHECK(line == "1,0.25,-0.5,0.25,0.5");
    std::getline(is, line);
    CHECK(line == "# pole_candidate, 0");
}

TEST_CASE("trajectory csv emits one row per sample") {
    JostSolution js;
    js.xi = {-1.0, 0.0, 1.0};
    js.samples = {Vec2{cplx(1.0, 0.0), cplx(0.0, 0.0)}, Vec2{cplx(0.5, 0.25), cplx(0.0, -1.0)},
                  Vec2{cplx(0.0, 0.0), cplx(1.0, 0.0)}};
    std::string csv = trajectory_csv(js);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "xi,w1_re,w1_im,w2_re,w2_im");
    std::getline(is, line);
    CHECK(line == "-1,1,0,0,0");
    std::getline(is, line);
    CHECK(line == "0,0.5,0.25,0,-1");
    std::getline(is, line);
    CHECK(line == "1,0,0,1,0");
}

TEST_CASE("stokes factorization serializes both matrices") {
    StokesFactorization st;
    st.S_minus = {{{cplx(-1.0, 0.0), cplx(0.0, 0.0)}, {cplx(0.0, 0.0), cplx(-1.0, 0.0)}}};
    st.S_plus = st.S_minus;
    json j = to_json(st);
    CHECK(j.at("s_minus").size() == 2);
    CHECK(j.at("s_minus")[0].size() == 2);
    CHECK(complex_from_json(j.at("s_plus")[1][1]) == cplx(-1.0, 0.0));
    CHECK(j.at("formal_monodromy") == "identity");
    CHECK(j.at("exponential_torus") == "diagonal { diag(c, 1/c) : c != 0 }");
}

TEST_CASE("non-finite condition numbers become null") {
    RecoveredPotential rp;
    rp.samples.push_back(PotentialSample{0.5, cplx(1.0, 0.0), cplx(1.0, 0.0), true,
                                         std::numeric_limits<double>::infinity()});
    rp.pole_candidates.push_back(0.5);
    json j = to_json(rp);
    CHECK(j.at("samples")[0].at("condition").is_null());
    CHECK(j.at("pole_candidates")[0] == 0.5);
}
