#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zs/contour.hpp"

using namespace zs;
using nlohmann::json;

TEST_CASE("path map and derivative") {
    Contour ct;
    ct.elevation = 2.0;
    CHECK(std::abs(ct.map(0.0) - cplx(0.0, 2.0)) < 1e-15);
    // endpoint flat: sech(20) ~ 4e-9
    CHECK(std::abs(ct.map(20.0).imag()) < 1e-7);
    // finite-difference check of dmap
    double h = 1e-6;
    for (double xi : {-3.0, -0.5, 0.0, 1.2, 7.0}) {
        cplx fd = (ct.map(xi + h) - ct.map(xi - h)) / (2.0 * h);
        CHECK(std::abs(fd - ct.dmap(xi)) < 1e-8);
    }
    // no overflow far out
    CHECK(std::isfinite(ct.dmap(400.0).imag()));
    CHECK(std::isfinite(ct.map(400.0).imag()));
}

TEST_CASE("zero potential takes the first ladder rung") {
    PotentialPair p = make_potential(json::parse(R"({"kind":"zero"})"));
    Contour ct = build_contour(p);
    CHECK(ct.elevation == doctest::Approx(1.0));
    CHECK(ct.half_length == doctest::Approx(20.0));
    CHECK(ct.margin == doctest::Approx(0.05));
}

TEST_CASE("negaton path clears every known pole by the margin") {
    PotentialPair p = make_potential(json::parse(R"({"kind":"negaton"})"));
    Contour ct = build_contour(p);
    auto dist_to = [&](cplx pole) {
        double best = 1e300;
        for (double xi = -20.0; xi <= 20.0; xi += 1e-3)
            best = std::min(best, std::abs(ct.map(xi) - pole));
        return best;
    };
    for (double rp : p.real_poles) CHECK(dist_to(cplx(rp, 0.0)) > ct.margin);
    for (cplx cp : p.complex_poles)
        if (cp.imag() > 0.0) CHECK(dist_to(cp) > ct.margin);
}

TEST_CASE("listed pole forces a ladder step") {
    // a pole sitting exactly on the default path peak (i * 1) rejects c = 1
    PotentialPair p = make_potential(json::parse(R"({"kind":"zero"})"));
    p.complex_poles = {cplx(0.0, 1.0)};
    Contour ct = build_contour(p);
    CHECK(ct.elevation != doctest::Approx(1.0));
    double d = 1e300;
    for (double xi = -20.0; xi <= 20.0; xi += 1e-3)
        d = std::min(d, std::abs(ct.map(xi) - cplx(0.0, 1.0)));
    CHECK(d > ct.margin);
}

TEST_CASE("denominator probes detect an unlisted pole near the path") {
    // q = 1 / ((x - z0)(x^2 + 900)) decays like x^-3; z0 hides near the c = 1
    // path but is not listed, so only the argument-principle probes can see it
    cplx z0(0.3, 0.955);
    PotentialPair p;
    p.q_raw = [z0](cplx x) { return 1.0 / ((x - z0) * (x * x + 900.0)); };
    p.r_raw = p.q_raw;
    p.denominator = [z0](cplx x) { return (x - z0) * (x * x + 900.0); };
    p.symmetry = Reduction::REqQ;
    p.decay_radius = 2.0;
    Contour ct = build_contour(p);
    double d = 1e300;
    for (double xi = -20.0; xi <= 20.0; xi += 1e-3)
        d = std::min(d, std::abs(ct.map(xi) - z0));
    CHECK(d > ct.margin);
}

TEST_CASE("no rung clears a pole ladder blocking every elevation") {
    PotentialPair p = make_potential(json::parse(R"({"kind":"zero"})"));
    for (double c : {1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0})
        p.complex_poles.push_back(cplx(0.0, c));
    CHECK_THROWS_AS(build_contour(p), NoValidContour);
}

TEST_CASE("margin is honored, not adjusted") {
    PotentialPair p = make_potential(json::parse(R"({"kind":"zero"})"));
    Contour ct = build_contour(p, 1.0, 20.0, 0.02);
    CHECK(ct.margin == doctest::Approx(0.02));
}
