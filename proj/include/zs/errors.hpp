#pragma once

#include <stdexcept>
#include <string>

namespace zs {

// Three families, so the CLI can map exceptions to exit codes:
//   InputError        -> exit 2  (bad schemas, bad parameters, violated preconditions)
//   NumericalError    -> exit 3  (iteration failures, underflow, unresolved clusters)
//   ContractViolation -> exit 4  (internal identities broken, forbidden requests like k = 0)
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ZS_ERROR(NAME, BASE)                          \
    struct NAME : BASE {                              \
        explicit NAME(const std::string& msg)         \
            : BASE(std::string(#NAME) + ": " + msg) {} \
    }

// potentials
ZS_ERROR(SchemaError, InputError);              // malformed constructor / data records
ZS_ERROR(EvaluationNearPole, NumericalError);   // point inside the pole exclusion radius
ZS_ERROR(PoleRefinementFailed, NumericalError); // real-pole refinement did not converge

// contour_ode
ZS_ERROR(NoValidContour, NumericalError);   // no ladder elevation satisfies the margin
ZS_ERROR(StepSizeUnderflow, NumericalError);
ZS_ERROR(WrongHalfPlane, InputError);       // Jost tag vs Im k mismatch

// scattering
ZS_ERROR(DegenerateWronskian, ContractViolation);
ZS_ERROR(MissingPartner, InputError);    // symmetry check lacks the -k or conj(k) entry
ZS_ERROR(IncompleteData, InputError);    // Stokes matrices need all four coefficients
ZS_ERROR(UnsupportedOrder, InputError);  // formal series displayed only through order 4
ZS_ERROR(DivisionByZeroPotential, InputError);

// spectrum
ZS_ERROR(BoundaryZero, NumericalError);      // zero of a too close to a counting boundary
ZS_ERROR(NoConvergence, NumericalError);     // Newton refinement exhausted its cap
ZS_ERROR(ClusterUnresolved, NumericalError); // winding/derivative signature inconsistent

// reconstruct
ZS_ERROR(InsufficientDerivatives, InputError);
ZS_ERROR(SingularSystem, NumericalError);  // carries the condition number in the message
ZS_ERROR(PoleCollision, InputError);       // requested k coincides with an eigen location
ZS_ERROR(NotReflectionless, InputError);

#undef ZS_ERROR

}  // namespace zs
