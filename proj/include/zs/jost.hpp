#pragma once

#include <optional>
#include <vector>

#include "zs/contour.hpp"
#include "zs/ode.hpp"
#include "zs/potentials.hpp"

namespace zs {

enum class JostTag { Phi, PhiBar, Psi, PsiBar };

std::string to_string(JostTag t);

struct JostOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    bool envelope = true;           // integrate M/N envelope variables (default)
    std::vector<double> samples;    // requested xi values; empty -> uniform default grid
    int default_sample_count = 65;  // used when samples is empty
};

// Sampled Jost solution along the contour. With envelope_form = true the
// samples hold the envelope variables
//   Phi:    M    = phi      * e^{+ik x}   -> (1,0) as x -> -inf
//   PhiBar: Mbar = phi_bar  * e^{-ik x}   -> (0,1) as x -> -inf
//   Psi:    N    = psi      * e^{-ik x}   -> (0,1) as x -> +inf
//   PsiBar: Nbar = psi_bar  * e^{+ik x}   -> (1,0) as x -> +inf
// so the boundary normalization is imposed exactly at xi = -L (Phi, PhiBar)
// or xi = +L (Psi, PsiBar). With envelope_form = false the raw solution w is
// stored instead (cross-check path; real k only makes sense numerically).
struct JostSolution {
    JostTag which = JostTag::Phi;
    cplx k;
    Contour contour;
    bool envelope_form = true;
    std::vector<double> xi;  // ascending
    std::vector<Vec2> samples;
    double tail_bound = 0.0;  // measured boundary-truncation error proxy

    // value at a requested sample point (must be one of xi up to roundoff)
    const Vec2& at(double xi_value) const;
    // raw Jost value at a sample: envelope times the analytic phase
    Vec2 raw_at(double xi_value) const;
};

// Integrate the ZS system w_x = [[-ik, q],[r, ik]] w re-parametrized along the
// contour, w_xi = gamma'(xi) A(gamma(xi)) w, in envelope variables by default.
// Launch side and initial data follow the tag's boundary normalization.
JostSolution integrate_zs(const PotentialPair& p, cplx k, const Contour& contour, JostTag which,
                          const JostOptions& opt = {});

// Analytic continuation off the real axis: Phi/Psi require Im k >= 0,
// PhiBar/PsiBar require Im k <= 0 (throws WrongHalfPlane otherwise), then
// identical to integrate_zs. integrate_zs itself enforces the same pairing for
// complex k; this entry point exists to make the halfplane contract explicit.
JostSolution continue_in_k(const PotentialPair& p, const Contour& contour, JostTag which, cplx k,
                           const JostOptions& opt = {});

}  // namespace zs
