#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zs/errors.hpp"
#include "zs/poly.hpp"

using namespace zs;

TEST_CASE("polynomial basics") {
    Poly p{{cplx(-6.0), cplx(11.0), cplx(-6.0), cplx(1.0)}};  // (x-1)(x-2)(x-3)
    CHECK(p.degree() == 3);
    CHECK(std::abs(p(2.0)) < 1e-14);
    CHECK(std::abs(p(0.0) - cplx(-6.0)) < 1e-14);

    Poly d = p.derivative();
    CHECK(d.degree() == 2);
    CHECK(std::abs(d(1.0) - cplx(2.0)) < 1e-14);  // 3x^2 - 12x + 11 at 1

    Poly z{{cplx(0.0), cplx(0.0)}};
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);

    Poly a{{cplx(1.0), cplx(1.0)}}, b{{cplx(-1.0), cplx(1.0)}};
    Poly prod = a * b;  // x^2 - 1
    CHECK(prod.degree() == 2);
    CHECK(std::abs(prod(3.0) - cplx(8.0)) < 1e-14);
    Poly sum = a + b;
    CHECK(std::abs(sum(5.0) - cplx(10.0)) < 1e-14);
    Poly diff = a - a;
    CHECK(diff.is_zero());
}

TEST_CASE("real cubic roots come back sorted") {
    Poly p{{cplx(-6.0), cplx(11.0), cplx(-6.0), cplx(1.0)}};
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(std::abs(roots[0] - cplx(1.0)) < 1e-10);
    CHECK(std::abs(roots[1] - cplx(2.0)) < 1e-10);
    CHECK(std::abs(roots[2] - cplx(3.0)) < 1e-10);
}

TEST_CASE("conjugate pair ordering") {
    Poly p{{cplx(1.0), cplx(0.0), cplx(1.0)}};  // x^2 + 1
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - cplx(0.0, -1.0)) < 1e-10);
    CHECK(std::abs(roots[1] - cplx(0.0, 1.0)) < 1e-10);
}

TEST_CASE("complex coefficients") {
    // (x - (1+2i)) (x - (3-i)) = x^2 - (4+i) x + (1+2i)(3-i)
    cplx r1(1.0, 2.0), r2(3.0, -1.0);
    Poly p{{r1 * r2, -(r1 + r2), cplx(1.0)}};
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - r1) < 1e-10);
    CHECK(std::abs(roots[1] - r2) < 1e-10);
}

TEST_CASE("double root accuracy") {
    Poly p{{cplx(4.0), cplx(-4.0), cplx(1.0)}};  // (x-2)^2
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 2);
    for (cplx r : roots) CHECK(std::abs(r - cplx(2.0)) < 1e-6);
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(poly_roots(Poly{}), InputError);
    CHECK(poly_roots(Poly{{cplx(3.0)}}).empty());  // nonzero constant: no roots
    auto lin = poly_roots(Poly{{cplx(0.0, -2.0), cplx(1.0)}});   // x - 2i
    REQUIRE(lin.size() == 1);
    CHECK(std::abs(lin[0] - cplx(0.0, 2.0)) < 1e-12);
}
