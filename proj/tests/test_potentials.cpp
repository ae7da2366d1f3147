#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zs/potentials.hpp"

using namespace zs;
using nlohmann::json;

namespace {
json parse(const char* text) { return json::parse(text); }
}  // namespace

TEST_CASE("zero potential") {
    PotentialPair p = make_potential(parse(R"({"kind":"zero"})"));
    CHECK(p.q(cplx(1.3, 0.2)) == cplx(0.0));
    CHECK(p.r(cplx(-4.0)) == cplx(0.0));
    CHECK(p.symmetry == Reduction::REqQ);
    CHECK(p.real_poles.empty());
}

TEST_CASE("rational in x: values, poles, reduction default") {
    PotentialPair p = make_potential(
        parse(R"({"kind":"rational_in_x","params":{"q_numerator":[0,1],"q_denominator":[1,0,1]}})"));
    // q = x / (x^2 + 1)
    CHECK(std::abs(p.q(2.0) - cplx(0.4)) < 1e-14);
    CHECK(std::abs(p.r(2.0) - cplx(0.4)) < 1e-14);  // default r = q
    CHECK(p.symmetry == Reduction::REqQ);
    CHECK(p.real_poles.empty());
    REQUIRE(p.complex_poles.size() == 2);
    CHECK(std::abs(p.complex_poles[0] - cplx(0.0, -1.0)) < 1e-10);
    CHECK(std::abs(p.complex_poles[1] - cplx(0.0, 1.0)) < 1e-10);
    CHECK(p.decay_radius == doctest::Approx(2.0));
}

TEST_CASE("rational in x: explicit reductions") {
    PotentialPair pneg = make_potential(parse(
        R"({"kind":"rational_in_x","params":{"q_numerator":[1],"q_denominator":[1,0,1],"reduction":"r_eq_neg_q"}})"));
    CHECK(std::abs(pneg.r(1.0) + pneg.q(1.0)) < 1e-14);
    CHECK(pneg.symmetry == Reduction::REqNegQ);

    // complex coefficients with r = conj(q): r(x) = conj(q(conj x))
    PotentialPair pc = make_potential(parse(
        R"({"kind":"rational_in_x","params":{"q_numerator":[[1,1]],"q_denominator":[2,0,1],"reduction":"r_eq_conj_q"}})"));
    cplx x(0.7, 0.0);
    CHECK(std::abs(pc.r(x) - std::conj(pc.q(x))) < 1e-14);
    CHECK(pc.symmetry == Reduction::REqConjQ);
}

TEST_CASE("rational in x: schema violations") {
    // numerator degree must be strictly below the denominator degree
    CHECK_THROWS_AS(make_potential(parse(
                        R"({"kind":"rational_in_x","params":{"q_numerator":[0,0,1],"q_denominator":[1,0,1]}})")),
                    SchemaError);
    CHECK_THROWS_AS(
        make_potential(parse(R"({"kind":"rational_in_x","params":{"q_numerator":[1],"q_denominator":[]}})")),
        SchemaError);
    CHECK_THROWS_AS(make_potential(parse(R"({"kind":"made_up"})")), SchemaError);
}

TEST_CASE("rational in exp: sech-squared profile") {
    // q = w / (1+w)^2 with w = e^{2x}: equals 1/(2 + 2 cosh 2x)
    PotentialPair p = make_potential(parse(
        R"({"kind":"rational_in_exp","params":{"lambda":2.0,"q_numerator":[0,1],"q_denominator":[1,2,1]}})"));
    CHECK(std::abs(p.q(0.0) - cplx(0.25)) < 1e-14);
    CHECK(std::abs(p.q(1.0) - cplx(1.0 / (2.0 + 2.0 * std::cosh(2.0)))) < 1e-14);
    // decays in both directions and the tail integral shrinks with the window
    CHECK(std::abs(p.q(40.0)) < 1e-30);
    CHECK(std::abs(p.q(-40.0)) < 1e-30);
    CHECK(tail_integral(p, 4.0) < tail_integral(p, 2.0));
    // poles at x = i pi (2n+1) / 2
    bool found = false;
    for (cplx z : p.complex_poles)
        if (std::abs(z - cplx(0.0, pi / 2.0)) < 1e-10) found = true;
    CHECK(found);
}

TEST_CASE("rational in exp rejects non-decaying data") {
    // degree(P) == degree(Q): tends to a constant at +infinity
    CHECK_THROWS_AS(make_potential(parse(
                        R"({"kind":"rational_in_exp","params":{"lambda":1.0,"q_numerator":[0,0,1],"q_denominator":[1,2,1]}})")),
                    SchemaError);
    // low order equal: tends to a constant at -infinity
    CHECK_THROWS_AS(make_potential(parse(
                        R"({"kind":"rational_in_exp","params":{"lambda":1.0,"q_numerator":[1],"q_denominator":[1,2,1]}})")),
                    SchemaError);
}

TEST_CASE("sech family") {
    PotentialPair p = make_potential(
        parse(R"({"kind":"sech_family","params":{"amplitude":2.0,"reduction":"r_eq_neg_conj_q"}})"));
    CHECK(std::abs(p.q(0.0) - cplx(2.0)) < 1e-14);
    CHECK(std::abs(p.r(0.0) + cplx(2.0)) < 1e-14);
    CHECK(p.symmetry == Reduction::REqNegConjQ);
    bool found = false;
    for (cplx z : p.complex_poles)
        if (std::abs(z - cplx(0.0, pi / 2.0)) < 1e-12) found = true;
    CHECK(found);
}

TEST_CASE("negaton closed form") {
    PotentialPair p = make_potential(parse(R"({"kind":"negaton"})"));
    CHECK(p.symmetry == Reduction::REqQ);
    // frozen multiprecision values of the closed form
    CHECK(std::abs(p.q(0.0) - cplx(4.0)) < 1e-12);
    CHECK(std::abs(p.q(0.5) - cplx(2.918719315624127407)) < 1e-12);
    CHECK(std::abs(p.q(1.0) - cplx(-7.3755532052002071355)) < 1e-11);
    CHECK(std::abs(p.q(-1.0) - cplx(0.044539735701755198748)) < 1e-13);
    CHECK(std::abs(p.q(2.0) - cplx(-0.60717098197055610441)) < 1e-12);
    CHECK(std::abs(p.q(-2.0) - cplx(0.29703325877577166725)) < 1e-12);
    CHECK(std::abs(p.r(1.0) - p.q(1.0)) == 0.0);
    // large-|x| branch stays finite and decays
    CHECK(std::abs(p.q(30.0)) < 1e-20);
    CHECK(std::abs(p.q(-30.0)) < 1e-20);

    REQUIRE(p.real_poles.size() == 2);
    CHECK(std::abs(p.real_poles[0] - (-0.24503653424027389)) < 1e-10);
    CHECK(std::abs(p.real_poles[1] - 0.86455844910718743) < 1e-10);

    // alias accepted
    PotentialPair alias = make_potential(parse(R"({"kind":"negaton_example31"})"));
    CHECK(std::abs(alias.q(0.5) - p.q(0.5)) == 0.0);
}

TEST_CASE("pole guard") {
    PotentialPair p = make_potential(parse(R"({"kind":"negaton"})"));
    CHECK_THROWS_AS(p.q(cplx(0.86455844910718743, 0.0)), EvaluationNearPole);
    CHECK_THROWS_AS(p.q(cplx(-0.2450365342, 1e-5)), EvaluationNearPole);
    // clear of the exclusion radius evaluates fine
    CHECK(std::isfinite(p.q(cplx(0.9, 0.0)).real()));

    PotentialPair sech2 = make_potential(
        parse(R"({"kind":"sech_family","params":{"amplitude":2.0,"reduction":"r_eq_neg_conj_q"}})"));
    CHECK_THROWS_AS(sech2.q(cplx(0.0, pi / 2.0) + cplx(1e-4, 0.0)), EvaluationNearPole);
}

TEST_CASE("locate_real_poles re-derives the negaton poles on any window") {
    PotentialPair p = make_potential(parse(R"({"kind":"negaton"})"));
    auto ps = locate_real_poles(p, -2.0, 2.0, 1e-12);
    REQUIRE(ps.size() == 2);
    CHECK(std::abs(ps[0] - (-0.24503653424027389)) < 1e-9);
    CHECK(std::abs(ps[1] - 0.86455844910718743) < 1e-9);
    // a window excluding one pole reports only the other
    auto left = locate_real_poles(p, -2.0, 0.0, 1e-12);
    REQUIRE(left.size() == 1);
    CHECK(std::abs(left[0] - (-0.24503653424027389)) < 1e-9);
}

TEST_CASE("classify_symmetry tie-break and detection") {
    PotentialPair zero = make_potential(parse(R"({"kind":"zero"})"));
    std::vector<double> pts{-1.0, -0.3, 0.4, 1.7};
    // all reductions hold for q = r = 0; the fixed order picks r = q
    CHECK(classify_symmetry(zero, pts) == Reduction::REqQ);

    PotentialPair pneg = make_potential(parse(
        R"({"kind":"rational_in_x","params":{"q_numerator":[1],"q_denominator":[1,0,1],"reduction":"r_eq_neg_q"}})"));
    CHECK(classify_symmetry(pneg, pts) == Reduction::REqNegQ);
}

TEST_CASE("reduction names round-trip") {
    for (Reduction r : {Reduction::REqQ, Reduction::REqNegQ, Reduction::REqConjQ,
                        Reduction::REqNegConjQ, Reduction::None})
        CHECK(reduction_from_string(to_string(r)) == r);
    CHECK(reduction_from_string("i") == Reduction::REqQ);
    CHECK(reduction_from_string("iv") == Reduction::REqNegConjQ);
    CHECK_THROWS_AS(reduction_from_string("bogus"), SchemaError);
}

TEST_CASE("tail integral decreases for the negaton") {
    PotentialPair p = make_potential(parse(R"({"kind":"negaton"})"));
    double t2 = tail_integral(p, 2.0), t4 = tail_integral(p, 4.0), t6 = tail_integral(p, 6.0);
    CHECK(t4 < t2);
    CHECK(t6 < t4);
}
