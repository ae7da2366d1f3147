#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zs/contour.hpp"
#include "zs/potentials.hpp"
#include "zs/reconstruct_series.hpp"
#include "zs/scattering.hpp"
#include "zs/spectrum.hpp"

namespace zs {

// Discrete spectral dataset driving the reconstruction linear system.
struct ReconstructionInput {
    std::vector<DiscreteEigen> upper;  // zeros k_j of a in C+, with b-data
    std::vector<DiscreteEigen> lower;  // zeros of a_bar in C-, with b_bar-data
};

// Throws on sign/length violations (upper Im > 0, lower Im < 0, derivative
// list lengths nu and nu as required by the residue formulas).
void validate(const ReconstructionInput& input);

ReconstructionInput reconstruction_input_from(const SpectrumResult& sr);

struct AssembledSystem {
    Eigen::MatrixXcd matrix;  // S x S, S = sum nu_j + sum nu_l
    Eigen::MatrixXcd rhs;     // S x 2: first column drives component 1, second component 2
    // row/unknown ordering: upper eigens first, each with orders r = 0..nu-1,
    // then lower eigens likewise
    std::vector<std::pair<int, int>> layout;  // (eigen index, order r); lower offset by upper count
    double condition = 0.0;                   // SVD-based estimate
};

// The reconstruction identities
//   Nbar(x;k) = e1 + sum_j PP_j(k),   N(x;k) = e2 + sum_l PPbar_l(k)
// differentiated 0..nu-1 times in k and evaluated at each eigen location give
// a square linear system for the unknown envelope derivatives; the matrix acts
// identically on both vector components, so it is assembled once per x with
// two right-hand-side columns. Throws PoleCollision when an upper and a lower
// location coincide, SingularSystem when the condition number exceeds 1e12.
AssembledSystem assemble_linear_system(const ReconstructionInput& input, cplx x);

// Solved reconstruction data at one x: the envelope derivative values and
// closed-form evaluators for the Jost envelopes and the potentials.
struct ReconstructionAtX {
    cplx x;
    double condition = 0.0;
    std::vector<std::vector<Vec2>> upper_N;  // N_j^{(r)}(x)
    std::vector<std::vector<Vec2>> lower_N;  // Nbar_l^{(r)}(x)
    std::vector<PrincipalPart<cplx>> upper_pp, lower_pp;

    Vec2 N(cplx k) const;      // e2 + lower-pole principal parts
    Vec2 Nbar(cplx k) const;   // e1 + upper-pole principal parts
    Vec2 psi(cplx k) const;    // N e^{+ikx}
    Vec2 psi_bar(cplx k) const;
    // exact simple-pole coefficient sums of the large-k expansion
    cplx q() const;  //  2i * sum of (k - pole)^{-1} coefficients of N's first component
    cplx r() const;  // -2i * sum for Nbar's second component
};

ReconstructionAtX solve_reconstruction(const ReconstructionInput& input, cplx x);

struct JostValues {
    Vec2 N, N_bar, psi, psi_bar;
};
// Convenience wrapper: solve at x, evaluate at k (PoleCollision if k hits an
// eigen location).
JostValues solve_jost(const ReconstructionInput& input, cplx x, cplx k);

struct PotentialSample {
    double x = 0.0;
    cplx q, r;
    bool singular = false;     // linear system unsolvable here: potential pole candidate
    double condition = 0.0;
};

struct RecoveredPotential {
    std::vector<PotentialSample> samples;
    std::vector<double> pole_candidates;  // x values flagged singular
    std::vector<std::string> warnings;
};

struct RecoverOptions {
    double richardson_tol = 1e-6;  // large-k cross-check tolerance
    bool cross_check = true;       // evaluate k N1 at |k| = 1e3, 1e4 and Richardson-extrapolate
};

// Exact coefficient-sum recovery of (q, r) on the grid; singular x values are
// reported as pole candidates, not fatal. A secondary large-k numerical limit
// guards the exact sums.
RecoveredPotential recover_potentials(const ReconstructionInput& input,
                                      const std::vector<double>& xs,
                                      const RecoverOptions& opt = {});

// Wrap the reconstruction as an evaluatable potential pair (with the system
// determinant as the denominator surrogate for pole probes), so it can be fed
// back through contour construction and forward scattering.
PotentialPair reconstructed_pair(const ReconstructionInput& input);

struct RoundtripOptions {
    std::vector<double> test_ks = {0.5, 1.0, 2.0};   // reflectionless precondition grid
    double reflectionless_tol = 1e-4;
    std::vector<double> xs;                          // comparison grid; empty -> [-4, 4] / 81
    std::vector<double> rescatter_ks = {0.5, 1.0, 2.0, 5.0};
    ExtractOptions extract;
    double pole_avoid = 0.05;  // skip comparison points this close to a pole
};

struct RoundtripReport {
    ReflectionlessReport reflectionless;
    SpectrumResult spectrum;
    RecoveredPotential recovered;
    double max_rel_deviation_q = 0.0;  // reconstruction vs original on the pole-avoiding grid
    double max_rel_deviation_r = 0.0;
    double max_rescatter_deviation = 0.0;  // |a - a_original| etc. on the rescatter grid
    std::vector<std::string> warnings;
};

// extract_discrete_data -> recover_potentials -> compare against p, then
// forward-scatter the reconstruction and compare coefficients with p's.
// Throws NotReflectionless when the precondition test fails.
RoundtripReport roundtrip(const PotentialPair& p, const Contour& contour,
                          const Box& region = {-5.0, 5.0, 0.05, 5.0},
                          const RoundtripOptions& opt = {});

}  // namespace zs
