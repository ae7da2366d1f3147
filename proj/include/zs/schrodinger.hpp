#pragma once

#include <functional>
#include <optional>

#include "zs/potentials.hpp"

namespace zs {

// Scalar second-order form of the ZS system for the first component:
//   zeta_xx + (k^2 - i k u1(x) + u2(x)) zeta = 0
// with u1 = q_x/q and u2 = q_xx/(2q) - 3 q_x^2/(4 q^2) - q r.
// For rational constructor records the derivatives are exact polynomial
// arithmetic; otherwise Cauchy-integral derivatives on a small circle. The
// infinity orders are filled for rational records with numerator degree m1 <
// denominator degree m2: u1 decays like 1/x (order 1) and u2 like
// x^{-min(2(m2-m1), 2)}.
struct SchrodingerForm {
    std::function<cplx(cplx)> u1_eval;
    std::function<cplx(cplx)> u2_eval;
    std::optional<int> order_u1_at_infinity;
    std::optional<int> order_u2_at_infinity;
    std::optional<int> m1, m2;  // numerator/denominator degrees of q when rational
};

// Throws DivisionByZeroPotential when an evaluator is called at a zero of q.
SchrodingerForm schrodinger_form(const PotentialPair& p);

}  // namespace zs
