#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zs/common.hpp"
#include "zs/errors.hpp"

namespace zs {

enum class Reduction { REqQ, REqNegQ, REqConjQ, REqNegConjQ, None };

std::string to_string(Reduction r);
Reduction reduction_from_string(const std::string& s);

// Evaluatable meromorphic pair (q, r) with decay metadata and pole bookkeeping.
// Values are immutable after construction; evaluators are pure.
struct PotentialPair {
    std::function<cplx(cplx)> q_raw;  // unguarded evaluators
    std::function<cplx(cplx)> r_raw;
    Reduction symmetry = Reduction::None;
    std::vector<double> real_poles;       // sorted
    std::vector<cplx> complex_poles;      // analytically known poles off the real axis
    double decay_radius = 1.0;            // tail integrability holds beyond this radius
    double pole_exclusion = 1e-3;         // evaluation closer than this to a pole throws
    std::string description;
    nlohmann::json record;                // constructor record; serialization source of truth

    // Optional denominator whose zeros are the poles of q or r; used by contour
    // construction for argument-principle probes near the path.
    std::function<cplx(cplx)> denominator;

    cplx q(cplx x) const { return guarded(q_raw, x); }
    cplx r(cplx x) const { return guarded(r_raw, x); }

 private:
    cplx guarded(const std::function<cplx(cplx)>& f, cplx x) const;
};

// Build from a constructor record { "kind": ..., "params": { ... } }.
// Kinds: "zero", "rational_in_x", "rational_in_exp", "sech_family", "negaton"
// ("negaton_example31" is accepted as an input alias for "negaton").
PotentialPair make_potential(const nlohmann::json& spec);

// Refined real-axis poles inside the window, each accurate to tol. Pure: the
// constructor already populated p.real_poles over a default window; this
// re-derives them for any window without mutating p.
std::vector<double> locate_real_poles(const PotentialPair& p, double window_lo,
                                      double window_hi, double tol = 1e-10);

// First of r=q, r=-q, r=conj q, r=-conj q holding at every sample within tol
// (fixed tie-break order), else None. Sample points are real and must avoid
// poles by the exclusion radius.
Reduction classify_symmetry(const PotentialPair& p, const std::vector<double>& sample_points,
                            double tol = 1e-10);

// Numerical tail integral of |q| + |r| over [R, 2R] and [-2R, -R], composite
// Gauss quadrature on dyadic windows. Decreasing in R beyond decay_radius is
// the testable proxy for tail integrability.
double tail_integral(const PotentialPair& p, double R);

}  // namespace zs
