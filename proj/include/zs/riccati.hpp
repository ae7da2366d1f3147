#pragma once

#include <vector>

#include "zs/common.hpp"
#include "zs/errors.hpp"

namespace zs {

enum class RiccatiBranch { Regular, Singular };

// Scalar trait: the imaginary unit in the coefficient field. Specialized for
// std::complex<double>; exact number types used in tests provide their own.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<cplx> {
    static cplx imag_unit() { return cplx(0.0, 1.0); }
};

// Formal series solution zeta = sum_j zeta_j y^{j-2} of the Riccati equation
// obtained from the scalar form at the irregular point y = 0 (y = 1/x), with
// potential expansion q = q0 y^2 + q1 y^3 + q2 y^4 + q3 y^5 + ... and
// r = r0 y^2 + ... . The leading coefficient solves zeta0^2 + 2ik zeta0 = 0:
// Regular branch zeta0 = 0, Singular branch zeta0 = -2ik. Each further
// coefficient solves the linear recursion 2 zeta0 zeta_j + 2ik zeta_j + s_j = 0
// with the quartic source polynomials s_1..s_4; the source table stops at
// j = 4, hence UnsupportedOrder beyond that.
template <class S>
std::vector<S> riccati_formal_series(S q0, S q1, S q2, S q3, S r0, S k, RiccatiBranch branch,
                                     int order) {
    if (order < 0 || order > 4) throw UnsupportedOrder("source polynomials known through order 4");
    if (q0 == S(0)) throw InputError("riccati_formal_series: q0 must be nonzero");
    if (k == S(0)) throw InputError("riccati_formal_series: k must be nonzero");

    const S i2k = S(2) * ScalarTraits<S>::imag_unit() * k;
    const S zeta0 = (branch == RiccatiBranch::Regular) ? S(0) : S(0) - i2k;
    const S denom = S(2) * zeta0 + i2k;  // +2ik on the regular branch, -2ik on the singular

    std::vector<S> z{zeta0};
    auto push = [&](const S& s_j) { z.push_back(S(0) - s_j / denom); };

    const S g1 = q1 / q0;                                        // q1/q0
    const S g2 = g1 * g1 - S(2) * q2 / q0;                       // q1^2/q0^2 - 2 q2/q0
    const S g3 = g1 * g1 * g1 - S(3) * q1 * q2 / (q0 * q0) + S(3) * q3 / q0;

    if (order >= 1) push(S(0) - S(2) * zeta0);
    if (order >= 2) push(S(0) - g1 * zeta0 - z[1] + z[1] * z[1]);
    if (order >= 3) push(g2 * zeta0 - g1 * z[1] + S(2) * z[1] * z[2]);
    if (order >= 4)
        push(S(0) - g3 * zeta0 + g2 * z[1] + g1 * z[2] + z[2] * z[2] + z[3] +
             S(2) * z[1] * z[3] - q0 * r0);
    return z;
}

}  // namespace zs
