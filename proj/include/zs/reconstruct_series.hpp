#pragma once

#include <vector>

#include "zs/errors.hpp"
#include "zs/riccati.hpp"  // ScalarTraits

namespace zs {

// Principal part at one eigenvalue of M(x;kappa) / ((k - kappa) a(kappa)),
// expressed as a linear functional on the unknown envelope derivatives
// N_j^{(r)}(x). The contribution of eigen j to the reconstruction identity is
//
//   sum_{m=1}^{nu} (k - pole)^{-m} e^{eps 2 i pole x}
//        sum_{l=0}^{nu-1} P_{m,l}(x) N_j^{(l)}(x)
//
// with eps = +1 for upper (unbarred) data and -1 for lower (barred) data, and
// P_{m,l} a polynomial of degree <= nu-1 stored by ascending powers of x.
//
// Everything is produced by exact series arithmetic over the scalar field S:
// Taylor data of b (derivatives b^{(r)}, r < nu), the reciprocal of the
// a-series (derivatives a^{(m)}, m = nu..2nu-1), and the geometric expansion
// of 1/(k - kappa); no quadrature radius appears anywhere.
template <class S>
struct PrincipalPart {
    S pole;
    int nu = 0;
    int eps = +1;
    // coeff[m-1][l] = P_{m,l}, ascending powers of x
    std::vector<std::vector<std::vector<S>>> coeff;
};

namespace detail {
inline long long factorial_ll(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
}  // namespace detail

template <class S>
PrincipalPart<S> residue_terms(S pole, int nu, const std::vector<S>& a_derivatives,
                               const std::vector<S>& b_derivatives, bool barred) {
    if (nu < 1) throw InputError("residue_terms: multiplicity must be positive");
    if (static_cast<int>(a_derivatives.size()) < nu)
        throw InsufficientDerivatives("need a^{(m)} for m = nu..2nu-1 (" + std::to_string(nu) +
                                      " values)");
    if (static_cast<int>(b_derivatives.size()) < nu)
        throw InsufficientDerivatives("need b^{(r)} for r = 0..nu-1 (" + std::to_string(nu) +
                                      " values)");

    // Taylor coefficients alpha_{nu+t} = a^{(nu+t)} / (nu+t)! of the a-series,
    // then the reciprocal series R of sum_t alpha_{nu+t} h^t to order nu-1.
    std::vector<S> alpha(nu), R(nu);
    for (int t = 0; t < nu; ++t) alpha[t] = a_derivatives[t] / S(detail::factorial_ll(nu + t));
    if (alpha[0] == S(0))
        throw InputError("residue_terms: a^{(nu)} vanishes; claimed multiplicity inconsistent");
    R[0] = S(1) / alpha[0];
    for (int t = 1; t < nu; ++t) {
        S acc = S(0);
        for (int s = 1; s <= t; ++s) acc = acc + alpha[s] * R[t - s];
        R[t] = S(0) - acc / alpha[0];
    }

    const S two_i = (barred ? S(0) - S(2) : S(2)) * ScalarTraits<S>::imag_unit();

    PrincipalPart<S> pp;
    pp.pole = pole;
    pp.nu = nu;
    pp.eps = barred ? -1 : +1;
    pp.coeff.assign(nu, std::vector<std::vector<S>>(nu, std::vector<S>(nu, S(0))));

    // mu_r = Taylor coefficient of M at order r as a linear functional:
    //   mu_r = e^{eps 2 i pole x} sum_l sum_{jp + pw = r - l}
    //            b^{(jp)} (eps 2i)^{pw} / (jp! l! pw!) x^{pw}  *  N^{(l)}
    // and the (k-pole)^{-m} coefficient is w_m = sum_{r+t=nu-m} mu_r R_t.
    for (int m = 1; m <= nu; ++m) {
        for (int r = 0; r <= nu - m; ++r) {
            const S& Rt = R[nu - m - r];
            for (int l = 0; l <= r; ++l) {
                S ip = S(1);  // (eps 2i)^pw, built incrementally
                for (int pw = 0; pw <= r - l; ++pw) {
                    int jp = r - l - pw;
                    S term = Rt * b_derivatives[jp] * ip /
                             S(detail::factorial_ll(jp) * detail::factorial_ll(l) *
                               detail::factorial_ll(pw));
                    pp.coeff[m - 1][l][pw] = pp.coeff[m - 1][l][pw] + term;
                    ip = ip * two_i;
                }
            }
        }
    }
    return pp;
}

// d^rho/dk^rho of (k - pole)^{-m} evaluated at k = at:
// (-1)^rho m (m+1) ... (m+rho-1) (at - pole)^{-m-rho}.
template <class S>
S inverse_power_derivative(const S& pole, int m, int rho, const S& at) {
    S coef = S(1);
    for (int s = 0; s < rho; ++s) coef = coef * S(m + s);
    if (rho % 2 == 1) coef = S(0) - coef;
    S base = at - pole;
    S pw = S(1);
    for (int s = 0; s < m + rho; ++s) pw = pw * base;
    return coef / pw;
}

}  // namespace zs
