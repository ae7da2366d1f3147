#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "zs/contour.hpp"
#include "zs/errors.hpp"
#include "zs/potentials.hpp"
#include "zs/reconstruct.hpp"

using namespace zs;

namespace {

const cplx I_(0.0, 1.0);

// a(k) = (k - i)/(k + i): simple zero at i, a'(i) = -i/2, norming value 1.
ReconstructionInput one_soliton() {
    ReconstructionInput in;
    in.upper.push_back({I_, 1, {cplx(0.0, -0.5)}, {cplx(1.0, 0.0)}});
    in.lower.push_back({-I_, 1, {cplx(0.0, 0.5)}, {cplx(1.0, 0.0)}});
    return in;
}

// a(k) = (k - i)^2/(k + i)^2: double zero at i with a''(i) = -1/2, a'''(i) = 0,
// norming data b(i) = 1, b'(i) = 0; mirrored in the lower half-plane.
ReconstructionInput negaton_data() {
    ReconstructionInput in;
    in.upper.push_back({I_, 2, {cplx(-0.5, 0.0), cplx(0.0, 0.0)}, {cplx(1.0, 0.0), cplx(0.0, 0.0)}});
    in.lower.push_back({-I_, 2, {cplx(-0.5, 0.0), cplx(0.0, 0.0)}, {cplx(1.0, 0.0), cplx(0.0, 0.0)}});
    return in;
}

// closed form recovered from the double-pole data
cplx negaton_q(double x) {
    double e2 = std::exp(2.0 * x), e4 = std::exp(4.0 * x), e8 = std::exp(8.0 * x);
    double num = -16.0 * e2 * (x * e4 + x + 1.0);
    double den = e8 - 2.0 * (8.0 * x * x + 8.0 * x + 3.0) * e4 + 1.0;
    return cplx(num / den, 0.0);
}

double dist(cplx u, cplx v) { return std::abs(u - v); }

constexpr double kRealPole = 0.86455844910718743;  // positive real pole of the recovered q

}  // namespace

TEST_CASE("assembled system for the one-soliton dataset") {
    AssembledSystem sys = assemble_linear_system(one_soliton(), cplx(1.0, 0.0));
    double c = std::exp(-2.0);
    REQUIRE(sys.matrix.rows() == 2);
    REQUIRE(sys.matrix.cols() == 2);
    CHECK(dist(sys.matrix(0, 0), cplx(1.0, 0.0)) < 1e-14);
    CHECK(dist(sys.matrix(1, 1), cplx(1.0, 0.0)) < 1e-14);
    CHECK(dist(sys.matrix(0, 1), cplx(c, 0.0)) < 1e-14);
    CHECK(dist(sys.matrix(1, 0), cplx(c, 0.0)) < 1e-14);
    // first column drives component 1 (nonzero on the lower row), second
    // column component 2 (nonzero on the upper row)
    CHECK(dist(sys.rhs(0, 0), cplx(0.0, 0.0)) < 1e-14);
    CHECK(dist(sys.rhs(1, 0), cplx(1.0, 0.0)) < 1e-14);
    CHECK(dist(sys.rhs(0, 1), cplx(1.0, 0.0)) < 1e-14);
    CHECK(dist(sys.rhs(1, 1), cplx(0.0, 0.0)) < 1e-14);
    REQUIRE(sys.layout.size() == 2);
    CHECK(sys.layout[0] == std::pair<int, int>(0, 0));
    CHECK(sys.layout[1] == std::pair<int, int>(1, 0));
    // symmetric 2x2 with off-diagonal c: condition (1 + c)/(1 - c)
    CHECK(std::abs(sys.condition - (1.0 + c) / (1.0 - c)) < 1e-10);
}

TEST_CASE("one-soliton envelopes match the closed form") {
    ReconstructionInput in = one_soliton();
    for (double x : {1.0, -0.3, 0.4}) {
        CAPTURE(x);
        ReconstructionAtX rec = solve_reconstruction(in, cplx(x, 0.0));
        double e2 = std::exp(-2.0 * x), det = 1.0 - std::exp(-4.0 * x);
        REQUIRE(rec.upper_N.size() == 1);
        REQUIRE(rec.upper_N[0].size() == 1);
        CHECK(dist(rec.upper_N[0][0][0], cplx(-e2 / det, 0.0)) < 1e-12);
        CHECK(dist(rec.upper_N[0][0][1], cplx(1.0 / det, 0.0)) < 1e-12);
        REQUIRE(rec.lower_N.size() == 1);
        CHECK(dist(rec.lower_N[0][0][0], cplx(1.0 / det, 0.0)) < 1e-12);
        CHECK(dist(rec.lower_N[0][0][1], cplx(-e2 / det, 0.0)) < 1e-12);

        // q = r = 2 / sinh(2x)
        cplx expect(2.0 / std::sinh(2.0 * x), 0.0);
        CHECK(dist(rec.q(), expect) < 1e-12 * (1.0 + std::abs(expect)));
        CHECK(dist(rec.r(), expect) < 1e-12 * (1.0 + std::abs(expect)));
    }
    // frozen spot value at x = 1
    ReconstructionAtX rec = solve_reconstruction(in, cplx(1.0, 0.0));
    CHECK(std::abs(rec.q().real() - 0.55144112954356641552) < 1e-14);
}

TEST_CASE("one-soliton evaluators away from the poles") {
    ReconstructionAtX rec = solve_reconstruction(one_soliton(), cplx(1.0, 0.0));
    double e2 = std::exp(-2.0), det = 1.0 - std::exp(-4.0);

    // N(k) = e2_vec + (k + i)^{-1} e^{-2x} (-2i) Nbar^{(0)}
    cplx k(0.0, 2.0);
    cplx fac = (1.0 / (k + I_)) * e2 * (-2.0 * I_);
    cplx n0 = fac * (1.0 / det);
    cplx n1 = 1.0 + fac * (-e2 / det);
    Vec2 N = rec.N(k);
    CHECK(dist(N[0], n0) < 1e-13);
    CHECK(dist(N[1], n1) < 1e-13);

    // psi carries the plane-wave factor
    Vec2 psi = rec.psi(k);
    cplx phase = std::exp(I_ * k * cplx(1.0, 0.0));
    CHECK(dist(psi[0], N[0] * phase) < 1e-13);
    CHECK(dist(psi[1], N[1] * phase) < 1e-13);

    // the barred identity mirrors it
    Vec2 Nb = rec.Nbar(-k);
    cplx facb = (1.0 / (-k - I_)) * e2 * (2.0 * I_);
    CHECK(dist(Nb[0], 1.0 + facb * (-e2 / det)) < 1e-13);
    CHECK(dist(Nb[1], facb * (1.0 / det)) < 1e-13);
}

TEST_CASE("reconstructed envelopes satisfy the first-order system") {
    // psi' must equal [[-ik, q], [r, ik]] psi with the reconstructed q, r
    ReconstructionInput in = one_soliton();
    const double x = 0.7;
    const cplx k(1.3, 0.4);

    auto psi_at = [&](double xx) { return solve_reconstruction(in, cplx(xx, 0.0)).psi(k); };
    auto fd = [&](double h) {
        Vec2 plus = psi_at(x + h), minus = psi_at(x - h);
        return Vec2{(plus[0] - minus[0]) / (2.0 * h), (plus[1] - minus[1]) / (2.0 * h)};
    };
    Vec2 d1 = fd(1e-3), d2 = fd(5e-4);
    Vec2 rich{(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0};

    ReconstructionAtX rec = solve_reconstruction(in, cplx(x, 0.0));
    Vec2 psi = rec.psi(k);
    cplx q = rec.q(), r = rec.r();
    CHECK(dist(rich[0], -I_ * k * psi[0] + q * psi[1]) < 1e-8);
    CHECK(dist(rich[1], I_ * k * psi[1] + r * psi[0]) < 1e-8);
}

TEST_CASE("double-pole dataset: frozen envelope values") {
    ReconstructionInput in = negaton_data();

    ReconstructionAtX r0 = solve_reconstruction(in, cplx(0.0, 0.0));
    REQUIRE(r0.upper_N.size() == 1);
    REQUIRE(r0.upper_N[0].size() == 2);
    CHECK(dist(r0.upper_N[0][0][0], cplx(-0.5, 0.0)) < 1e-12);
    CHECK(dist(r0.upper_N[0][0][1], cplx(0.5, 0.0)) < 1e-12);

    ReconstructionAtX r1 = solve_reconstruction(in, cplx(1.0, 0.0));
    CHECK(dist(r1.upper_N[0][0][0], cplx(2.2315585341532598613, 0.0)) < 1e-10);
    CHECK(dist(r1.upper_N[0][0][1], cplx(2.8645170984378624735, 0.0)) < 1e-10);

    ReconstructionAtX rm = solve_reconstruction(in, cplx(-1.0, 0.0));
    CHECK(dist(rm.upper_N[0][0][0], cplx(0.14363549782348472855, 0.0)) < 1e-10);
    CHECK(dist(rm.upper_N[0][0][1], cplx(0.020945900217393399122, 0.0)) < 1e-10);
}

TEST_CASE("double-pole dataset: recovered potential matches the closed form") {
    ReconstructionInput in = negaton_data();
    for (double x : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}) {
        CAPTURE(x);
        ReconstructionAtX rec = solve_reconstruction(in, cplx(x, 0.0));
        cplx expect = negaton_q(x);
        CHECK(dist(rec.q(), expect) < 1e-10 * (1.0 + std::abs(expect)));
        CHECK(dist(rec.r(), rec.q()) < 1e-10 * (1.0 + std::abs(rec.q())));
    }
    CHECK(dist(solve_reconstruction(in, cplx(0.0, 0.0)).q(), cplx(4.0, 0.0)) < 1e-12);
}

TEST_CASE("double-pole dataset: the real pole shows up as a singular system") {
    ReconstructionInput in = negaton_data();
    CHECK_THROWS_AS(solve_reconstruction(in, cplx(kRealPole, 0.0)), SingularSystem);
    // just next to it the potential is enormous
    ReconstructionAtX rec = solve_reconstruction(in, cplx(kRealPole + 5e-5, 0.0));
    CHECK(std::abs(rec.q()) > 1e4);
}

TEST_CASE("grid recovery reports singular points as pole candidates") {
    ReconstructionInput in = negaton_data();
    RecoveredPotential rp = recover_potentials(in, {0.0, kRealPole, 1.0});
    REQUIRE(rp.samples.size() == 3);
    CHECK_FALSE(rp.samples[0].singular);
    CHECK(rp.samples[1].singular);
    CHECK_FALSE(rp.samples[2].singular);
    REQUIRE(rp.pole_candidates.size() == 1);
    CHECK(rp.pole_candidates[0] == kRealPole);
    CHECK(dist(rp.samples[0].q, cplx(4.0, 0.0)) < 1e-10);
    CHECK(dist(rp.samples[2].q, negaton_q(1.0)) < 1e-9);
    CHECK(rp.warnings.empty());
}

TEST_CASE("dataset validation") {
    // upper eigen on the wrong side
    ReconstructionInput bad = one_soliton();
    bad.upper[0].location = cplx(0.5, -1.0);
    CHECK_THROWS_AS(validate(bad), InputError);

    // wrong derivative count for the claimed multiplicity
    bad = one_soliton();
    bad.upper[0].a_derivatives = {cplx(1.0), cplx(2.0)};
    CHECK_THROWS_AS(validate(bad), InsufficientDerivatives);
    bad = one_soliton();
    bad.upper[0].b_derivatives.clear();
    CHECK_THROWS_AS(validate(bad), InsufficientDerivatives);

    // vanishing leading coefficient derivative
    bad = one_soliton();
    bad.upper[0].a_derivatives[0] = cplx(0.0);
    CHECK_THROWS_AS(validate(bad), InputError);

    // duplicate locations must be merged
    bad = one_soliton();
    bad.upper.push_back(bad.upper[0]);
    CHECK_THROWS_AS(validate(bad), InputError);

    // non-finite data
    bad = one_soliton();
    bad.lower[0].b_derivatives[0] = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(validate(bad), InputError);
}

TEST_CASE("jost evaluation refuses eigen locations") {
    ReconstructionInput in = one_soliton();
    CHECK_THROWS_AS(solve_jost(in, cplx(0.5, 0.0), I_), PoleCollision);
    JostValues jv = solve_jost(in, cplx(1.0, 0.0), cplx(0.0, 2.0));
    ReconstructionAtX rec = solve_reconstruction(in, cplx(1.0, 0.0));
    CHECK(dist(jv.N[0], rec.N(cplx(0.0, 2.0))[0]) < 1e-14);
    CHECK(dist(jv.psi_bar[1], rec.psi_bar(cplx(0.0, 2.0))[1]) < 1e-14);
}

TEST_CASE("reconstruction wrapped as an evaluatable potential") {
    PotentialPair p = reconstructed_pair(one_soliton());

    // q = 2/sinh(2x): one real pole at the origin
    REQUIRE(p.real_poles.size() == 1);
    CHECK(std::abs(p.real_poles[0]) < 1e-8);
    CHECK(p.symmetry == Reduction::REqQ);
    CHECK(dist(p.q(cplx(1.0, 0.0)), cplx(2.0 / std::sinh(2.0), 0.0)) < 1e-10);
    CHECK(dist(p.r(cplx(1.0, 0.0)), p.q(cplx(1.0, 0.0))) < 1e-12);

    // evaluation inside the pole exclusion radius is refused
    CHECK_THROWS_AS(p.q(cplx(1e-8, 0.0)), EvaluationNearPole);

    // the constructor record reproduces the same potential
    CHECK(p.record.at("kind").get<std::string>() == "reconstructed");
    PotentialPair again = make_potential(p.record);
    CHECK(dist(again.q(cplx(0.7, 0.0)), p.q(cplx(0.7, 0.0))) < 1e-12);
    CHECK(again.symmetry == p.symmetry);

    // denominator surrogate: nonzero away from the pole, callable on complex x
    REQUIRE(static_cast<bool>(p.denominator));
    CHECK(std::abs(p.denominator(cplx(1.0, 0.2))) > 1e-6);
}

TEST_CASE("full roundtrip on the reconstructed one-soliton") {
    PotentialPair p = reconstructed_pair(one_soliton());
    Contour contour = build_contour(p);
    RoundtripReport rep = roundtrip(p, contour, Box{-2.0, 2.0, 0.05, 2.0});

    CHECK(rep.reflectionless.reflectionless);
    REQUIRE(rep.spectrum.upper.size() == 1);
    CHECK(dist(rep.spectrum.upper[0].location, I_) < 1e-7);
    CHECK(rep.spectrum.upper[0].multiplicity == 1);
    CHECK(rep.max_rel_deviation_q < 1e-6);
    CHECK(rep.max_rel_deviation_r < 1e-6);
    CHECK(rep.max_rescatter_deviation < 1e-6);
}

TEST_CASE("roundtrip refuses a reflecting potential") {
    PotentialPair p = make_potential(nlohmann::json::parse(
        R"({"kind":"sech_family","params":{"amplitude":1.5,"reduction":"r_eq_neg_conj_q"}})"));
    Contour contour = build_contour(p);
    CHECK_THROWS_AS(roundtrip(p, contour, Box{-2.0, 2.0, 0.05, 2.0}), NotReflectionless);
}
