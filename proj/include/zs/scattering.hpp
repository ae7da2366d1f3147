#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "zs/contour.hpp"
#include "zs/jost.hpp"
#include "zs/potentials.hpp"

namespace zs {

using Mat2 = std::array<std::array<cplx, 2>, 2>;

// Scattering coefficients at one spectral parameter. For real k all four are
// present; for Im k > 0 only a (and for Im k < 0 only a_bar) is analytic and
// computed, the rest stay absent. rho/rho_bar are omitted (absent, not zero)
// when |a| or |a_bar| < 1e-12.
struct ScatteringData {
    cplx k;
    std::optional<cplx> a, a_bar, b, b_bar;
    std::optional<cplx> rho, rho_bar;
    std::optional<double> unitarity_residual;  // |a*a_bar - b*b_bar - 1|, real k only
    double wronskian_spread = 0.0;             // max variation across matching points
};

struct ScatterOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::vector<double> matching_points;  // xi values; empty -> {-L/4, 0, L/4}
    double wronskian_tol = 1e-6;          // DegenerateWronskian beyond this drift
    // matching points whose phase weight exp(2|Re k| c sech xi) exceeds
    // e^{phase_exponent_cap} are excluded from the b / b_bar averages (the
    // weight amplifies integration noise); a, a_bar are phase-free and always
    // use every point.
    double phase_exponent_cap = 30.0;
};

// Wronskian extraction: a = det(phi, psi), a_bar = det(psi_bar, phi_bar),
// b = det(psi_bar, phi), b_bar = det(phi_bar, psi), evaluated at each matching
// point in envelope variables and averaged; spread records the worst pairwise
// deviation over the matching points.
ScatteringData scatter_at(const PotentialPair& p, cplx k, const Contour& contour,
                          const ScatterOptions& opt = {});

struct GridEntry {
    cplx k;
    std::optional<ScatteringData> data;  // absent if this entry failed
    std::string error;                   // failure description, empty on success
};

// Elementwise scatter_at, order preserving; per-entry failures are collected
// in the result instead of aborting the grid.
std::vector<GridEntry> scatter_grid(const PotentialPair& p, const std::vector<cplx>& ks,
                                    const Contour& contour, const ScatterOptions& opt = {});

// Max deviation over the grid of the two identities of the matching reduction:
//   r =  q       : a_bar(k) = a(-k),         b_bar(k) =  b(-k)
//   r = -q       : a_bar(k) = a(-k),         b_bar(k) = -b(-k)
//   r =  conj(q) : a_bar(k) = conj(a(k*)),   b_bar(k) =  conj(b(k*))
//   r = -conj(q) : a_bar(k) = conj(a(k*)),   b_bar(k) = -conj(b(k*))
// Throws MissingPartner when the grid lacks the required -k or conj(k) entry.
double check_symmetry_relations(const std::vector<ScatteringData>& grid, Reduction symmetry);

// Stokes matrices of the irregular singularity at infinity, expressed through
// the scattering coefficients: S_minus = [[a, b_bar], [b, a_bar]] and S_plus =
// its inverse [[a_bar, -b_bar], [-b, a]] / det(S_minus) (the two displays agree
// exactly when the unitarity relation a a_bar - b b_bar = 1 holds; normalizing
// by the determinant keeps S_plus * S_minus = id at machine precision). The
// formal monodromy is the identity and the exponential torus is the diagonal
// group {diag(c, 1/c)}; both are fixed facts reported as strings.
struct StokesFactorization {
    Mat2 S_minus, S_plus;
    std::string formal_monodromy = "identity";
    std::string exponential_torus = "diagonal { diag(c, 1/c) : c != 0 }";
};
StokesFactorization stokes_matrices(const ScatteringData& sd);

struct ReflectionlessReport {
    bool reflectionless = false;
    cplx worst_k;
    double worst_value = 0.0;  // max(|b|, |b_bar|) over the grid
};

// Necessary-condition diagnostic: true iff max(|b|, |b_bar|) < tol across the
// (real, nonzero k) grid. Makes no claim beyond the coefficient sizes.
ReflectionlessReport reflectionless_test(const std::vector<ScatteringData>& grid, double tol);
ReflectionlessReport reflectionless_test(const PotentialPair& p, const std::vector<double>& ks,
                                         const Contour& contour, double tol,
                                         const ScatterOptions& opt = {});

}  // namespace zs
