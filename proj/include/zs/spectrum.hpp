#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zs/contour.hpp"
#include "zs/potentials.hpp"

namespace zs {

struct Box {
    double re0, re1, im0, im1;
    double width() const { return re1 - re0; }
    double height() const { return im1 - im0; }
};

// One zero of a (upper half-plane) or a_bar (lower half-plane) with the data
// the reconstruction needs:
//   a_derivatives: a^{(m)}(k_j) for m = nu .. 2*nu - 1
//   b_derivatives: b^{(r)}(k_j) for r = 0 .. nu - 1
// (barred analogues when Im location < 0).
struct DiscreteEigen {
    cplx location;
    int multiplicity = 1;
    std::vector<cplx> a_derivatives;
    std::vector<cplx> b_derivatives;
};

struct SpectrumResult {
    std::vector<DiscreteEigen> upper, lower;
    std::vector<std::string> warnings;
};

struct CountOptions {
    double min_modulus = 1e-8;      // BoundaryZero below this on the boundary
    int initial_nodes_per_side = 48;
    int max_refine_depth = 42;
    double integer_tol = 1e-3;      // winding must land this close to an integer
};

// Argument-principle count (with multiplicity) of the zeros of f inside the
// rectangle: adaptive trapezoidal integration of d(log f) along the boundary,
// refining any segment whose phase increment is ambiguous. Fails loudly if the
// accumulated winding is not within integer_tol of an integer.
int count_zeros(const std::function<cplx(cplx)>& f, const Box& region,
                const CountOptions& opt = {});

struct RefineOptions {
    double tol = 1e-10;
    int max_iterations = 80;
    double derivative_radius = 0.05;  // Cauchy circle for f'; shrunk near the real axis
    int circle_nodes = 16;
};

// Newton iteration k <- k - f(k)/f'(k) with the derivative from a Cauchy
// integral on a small circle; terminates when both |f| and the step are below
// tol (multiple zeros converge linearly, hence the generous cap).
cplx refine_zero(const std::function<cplx(cplx)>& f, cplx k0, const RefineOptions& opt = {});

struct ExtractOptions {
    double rtol = 1e-11;       // integration tolerances for the a(k) evaluations
    double atol = 1e-13;
    double refine_tol = 1e-10;
    double min_cell = 1e-3;    // ClusterUnresolved below this with winding > cap
    int multiplicity_cap = 4;
    double resolve_diameter = 0.4;  // cells at most this wide before refinement starts
    double near_real_axis = 0.05;   // refined zeros below this Im get a warning
    double b_consistency_tol = 1e-6;
    int cauchy_nodes = 64;
};

// Full discrete-spectrum harvest over region (in the upper half-plane) and its
// mirror image (lower half-plane, using a_bar):
//  * subdivide until each cell's winding is resolved, refine each zero,
//    multiplicity = winding of a tight circle (argument-principle moments give
//    the cluster centroid to high accuracy for multiple zeros),
//  * a-derivatives via Cauchy integrals on a circle of radius
//    min(0.5 * distance to nearest other zero, 0.25 * |Im k_j|),
//  * b(k_j) from the proportionality phi = b psi as a component ratio at
//    matching points (cross-checked between components), and b^{(r)} for
//    r >= 1 recursively from the Taylor relation
//      d^r/dk^r M = d^r/dk^r (b N e^{2ikx})   at k_j
//    with M- and N-derivatives from Cauchy integrals — all evaluations stay in
//    the half-plane where those envelopes are analytic.
SpectrumResult extract_discrete_data(const PotentialPair& p, const Contour& contour,
                                     const Box& region = {-5.0, 5.0, 0.05, 5.0},
                                     const ExtractOptions& opt = {});

}  // namespace zs
